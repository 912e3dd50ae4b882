use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use pathspectra_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ps_last_error()) }.to_string_lossy().into_owned()
}

fn state(system: PsSystem, param: f64, quantum: f64) -> *mut PsState {
    let mut s = ptr::null_mut();
    let st = unsafe { ps_state_new(system, 1.0, 1.0, param, quantum, &mut s) };
    assert_eq!(st, PsStatus::Ok, "{}", last_error());
    assert!(!s.is_null());
    s
}

#[test]
fn oscillator_energy_and_eigenfunction() {
    let s = state(PsSystem::HarmonicOscillator, 1.0, 3.0);
    let mut e = 0.0;
    let mut psi = PsComplex::default();
    unsafe {
        assert_eq!(ps_state_energy(s, &mut e), PsStatus::Ok);
        assert_eq!(ps_eigenfunction(s, 0.0, &mut psi), PsStatus::Ok);
        ps_state_free(s);
    }
    assert_eq!(e, 3.5);
    // Odd level vanishes at the origin.
    assert!(psi.re.abs() < 1e-15 && psi.im == 0.0);
}

#[test]
fn bad_arguments_report_status_and_message() {
    let mut s = ptr::null_mut();
    let st = unsafe { ps_state_new(PsSystem::HarmonicOscillator, 1.0, -1.0, 1.0, 0.0, &mut s) };
    assert_eq!(st, PsStatus::Domain);
    assert!(s.is_null());
    assert!(!last_error().is_empty());

    let st = unsafe { ps_state_new(PsSystem::FreeLine, 1.0, 1.0, 0.0, 1.0, ptr::null_mut()) };
    assert_eq!(st, PsStatus::NullPointer);

    let mut e = 0.0;
    assert_eq!(unsafe { ps_state_energy(ptr::null(), &mut e) }, PsStatus::NullPointer);

    // A successful call clears the message.
    let mut z = PsComplex::default();
    assert_eq!(unsafe { ps_gaussian_phase_integral(0.0, 1.0, 0.0, &mut z) }, PsStatus::Ok);
    assert_eq!(last_error(), "");
    assert!((z.re - 1.0).abs() < 1e-14 && z.im.abs() < 1e-14);

    assert_eq!(unsafe { ps_gaussian_phase_integral(f64::NAN, 1.0, 1.0, &mut z) }, PsStatus::Domain);
}

#[test]
fn oscillator_at_half_period_is_singular() {
    let s = state(PsSystem::HarmonicOscillator, 1.0, 0.0);
    let mut k = PsComplex::default();
    let st = unsafe { ps_propagator(s, 0.0, 0.5, std::f64::consts::PI, &mut k) };
    unsafe { ps_state_free(s) };
    assert_eq!(st, PsStatus::Singularity);
}

#[test]
fn free_distribution_round_trip() {
    let s = state(PsSystem::FreeLine, 0.0, 1.0);
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(ps_distribution_new(s, 1e4, 0, 1e-3, &mut d), PsStatus::Ok, "{}", last_error());
        let mut n = 0usize;
        assert_eq!(ps_distribution_len(d, &mut n), PsStatus::Ok);
        assert!(n > 100);
        let mut p = vec![0.0; n];
        let mut v = vec![PsComplex::default(); n];
        assert_eq!(ps_distribution_copy(d, p.as_mut_ptr(), v.as_mut_ptr(), n), PsStatus::Ok);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
        let mut m = PsMoments::default();
        assert_eq!(ps_distribution_moments(d, &mut m), PsStatus::Ok);
        assert!((m.norm - 1.0).abs() < 1e-6);
        assert!((m.mean - 1.0).abs() < 1e-3);
        // Time averaging exists only for the oscillator.
        let mut d2 = ptr::null_mut();
        assert_eq!(ps_distribution_new(s, 1e4, 1, 0.0, &mut d2), PsStatus::Domain);
        ps_distribution_free(d);
        ps_state_free(s);
    }
}

#[test]
fn window_average_and_integrand() {
    let s = state(PsSystem::FreeLine, 0.0, 1.0);
    let (mut f, mut wa) = (PsComplex::default(), PsComplex::default());
    unsafe {
        assert_eq!(ps_integrand(s, 1.0, 0.0, 100.0, &mut f), PsStatus::Ok);
        assert_eq!(ps_window_average(s, 1.0, 0.0, 100.0, &mut wa), PsStatus::Ok);
        ps_state_free(s);
    }
    // |integrand| = √(T/2πħM) for the free line.
    assert!(((f.re * f.re + f.im * f.im).sqrt() - (100.0 / std::f64::consts::TAU).sqrt()).abs() < 1e-12);
    assert!(wa.re.is_finite() && wa.im.is_finite());
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(ps_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

const EXPORTS: &[&str] = &[
    "ps_last_error",
    "ps_state_new",
    "ps_state_free",
    "ps_state_energy",
    "ps_eigenfunction",
    "ps_propagator",
    "ps_gaussian_phase_integral",
    "ps_integrand",
    "ps_window_average",
    "ps_distribution_new",
    "ps_distribution_free",
    "ps_distribution_len",
    "ps_distribution_copy",
    "ps_distribution_moments",
    "ps_version",
];

fn header() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pathspectra.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        let declared = h.contains(&format!(" {name}(")) || h.contains(&format!("*{name}("));
        assert!(declared, "{name} missing from header");
    }
    assert!(h.contains("PS_STATUS_SINGULARITY = 4"));
    assert!(h.contains("typedef struct PsState PsState;"));
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let src = format!("#include \"{}\"\nint main(void) {{ PsState *s = 0; (void)s; return PS_STATUS_OK; }}\n", header().display());
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("check.c");
    std::fs::write(&file, src).unwrap();
    match Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&file).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}
