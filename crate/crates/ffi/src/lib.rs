//! C interface to `pathspectra`.
//!
//! Every function returns a [`PsStatus`]; results come back through out
//! pointers. On failure [`ps_last_error`] describes what went wrong on the
//! calling thread. States and distributions are opaque heap objects that
//! the caller releases with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pathspectra::distribution::{moments, spatial_average, time_average, PathDistribution};
use pathspectra::phasor::{integrand, window_average};
use pathspectra::quadrature::{GridBundle, GridOverrides};
use pathspectra::specfun::gaussian_phase_integral;
use pathspectra::systems::propagator;
use pathspectra::{Complex64, EigenstateSpec, Error, SystemSpec};

/// Result of every call. The numeric values match the command-line exit
/// codes where the two overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    Usage = 2,
    Domain = 3,
    Singularity = 4,
    Io = 5,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsSystem {
    FreeLine = 0,
    Circle = 1,
    HardWall = 2,
    SquareWell = 3,
    HarmonicOscillator = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for PsComplex {
    fn from(z: Complex64) -> Self {
        PsComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PsMoments {
    pub norm: f64,
    pub mean: f64,
    pub peak_location: f64,
    pub fwhm: f64,
    pub max_im_ratio: f64,
}

/// An eigenstate of one of the supported systems.
pub struct PsState(EigenstateSpec);

/// A sampled path distribution.
pub struct PsDistribution(PathDistribution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PsStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            PsStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            match e.exit_code() {
                2 => PsStatus::Usage,
                4 => PsStatus::Singularity,
                5 => PsStatus::Io,
                _ => PsStatus::Domain,
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PsStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failed call on this thread, or an empty
/// string. The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates an eigenstate. `param` is the circle radius, the well width or
/// the oscillator frequency (ignored for the line and half-line).
/// `quantum` is k, ℓ or n as the system requires.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_state_new(
    system: PsSystem,
    hbar: f64,
    mass: f64,
    param: f64,
    quantum: f64,
    out: *mut *mut PsState,
) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let sys = match system {
            PsSystem::FreeLine => SystemSpec::free_line(hbar, mass),
            PsSystem::Circle => SystemSpec::circle(hbar, mass, param),
            PsSystem::HardWall => SystemSpec::hard_wall(hbar, mass),
            PsSystem::SquareWell => SystemSpec::square_well(hbar, mass, param),
            PsSystem::HarmonicOscillator => SystemSpec::harmonic_oscillator(hbar, mass, param),
        }?;
        let state = EigenstateSpec::from_number(sys, quantum)?;
        put(out, Box::into_raw(Box::new(PsState(state))), "out")
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must come from [`ps_state_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_state_free(state: *mut PsState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_state_energy(state: *const PsState, out: *mut f64) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(out, s.0.energy(), "out")
    })
}

/// ψ(x).
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_eigenfunction(state: *const PsState, x: f64, out: *mut PsComplex) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(out, s.0.eigenfunction(x)?.into(), "out")
    })
}

/// K(x_f, T; x₀, 0) of the state's system.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_propagator(state: *const PsState, x0: f64, xf: f64, t: f64, out: *mut PsComplex) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(out, propagator(s.0.system(), x0, xf, t)?.into(), "out")
    })
}

/// ∫_a^b e^{iγu²} du.
///
/// # Safety
/// `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_gaussian_phase_integral(a: f64, b: f64, gamma: f64, out: *mut PsComplex) -> PsStatus {
    guard(|| {
        if a.is_nan() || b.is_nan() || !gamma.is_finite() {
            return Err(Error::Domain("limits and γ must not be NaN".into()).into());
        }
        put(out, gaussian_phase_integral(a, b, gamma).into(), "out")
    })
}

/// The p_c integrand at one point.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_integrand(state: *const PsState, p_c: f64, x_f: f64, t: f64, out: *mut PsComplex) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(out, integrand(&s.0, p_c, x_f, t)?.into(), "out")
    })
}

/// ΔF/(2w) at one p_c with the default grids.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_window_average(state: *const PsState, p_c: f64, x_f: f64, t: f64, out: *mut PsComplex) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        let g = GridBundle::for_state(&s.0, t, &GridOverrides::default())?;
        put(out, window_average(&s.0, p_c, x_f, t, &g)?.into(), "out")
    })
}

/// Computes 𝒫(p_c, T), or its period average when `time_averaged` is
/// nonzero (oscillator only). `dp_c <= 0` keeps the default spacing.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_distribution_new(
    state: *const PsState,
    t: f64,
    time_averaged: i32,
    dp_c: f64,
    out: *mut *mut PsDistribution,
) -> PsStatus {
    guard(|| {
        let s = get(state, "state")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let ov = GridOverrides {
            dp_c: (dp_c > 0.0).then_some(dp_c),
            ..Default::default()
        };
        let g = GridBundle::for_state(&s.0, t, &ov)?;
        let d = if time_averaged != 0 {
            time_average(&s.0, t, &g)?
        } else {
            spatial_average(&s.0, t, &g)?
        };
        put(out, Box::into_raw(Box::new(PsDistribution(d))), "out")
    })
}

/// Releases a distribution. Null is ignored.
///
/// # Safety
/// `dist` must come from [`ps_distribution_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_distribution_free(dist: *mut PsDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of p_c samples.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_distribution_len(dist: *const PsDistribution, out: *mut usize) -> PsStatus {
    guard(|| {
        let d = get(dist, "dist")?;
        put(out, d.0.p_c.len(), "out")
    })
}

/// Copies up to `capacity` samples into `p_c` and `values`.
///
/// # Safety
/// `p_c` and `values` must each have room for `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn ps_distribution_copy(
    dist: *const PsDistribution,
    p_c: *mut f64,
    values: *mut PsComplex,
    capacity: usize,
) -> PsStatus {
    guard(|| {
        let d = get(dist, "dist")?;
        if p_c.is_null() {
            return Err(Failure::Null("p_c"));
        }
        if values.is_null() {
            return Err(Failure::Null("values"));
        }
        let n = capacity.min(d.0.p_c.len());
        for i in 0..n {
            p_c.add(i).write(d.0.p_c[i]);
            values.add(i).write(d.0.values[i].into());
        }
        Ok(())
    })
}

/// Norm, mean, peak, width and imaginary-part ratio.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ps_distribution_moments(dist: *const PsDistribution, out: *mut PsMoments) -> PsStatus {
    guard(|| {
        let d = get(dist, "dist")?;
        let m = moments(&d.0)?;
        let m = PsMoments {
            norm: m.norm,
            mean: m.mean,
            peak_location: m.peak_location,
            fwhm: m.fwhm,
            max_im_ratio: m.max_im_ratio,
        };
        put(out, m, "out")
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
