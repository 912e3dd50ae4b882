//! Independent reference integrators shared by the integration tests.
#![allow(dead_code)]

use pathspectra::Complex64;

fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + fm * 4.0 + fb) * (h / 6.0)
}

fn refine(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction. `pieces` uniform panels
/// are refined independently so oscillatory integrands start resolved.
pub fn adaptive(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, pieces: usize) -> Complex64 {
    let h = (b - a) / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..pieces {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = simpson(fa, fm, fb, hi - lo);
        total += refine(&f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 40);
    }
    total
}

/// ∫_lo^hi of |p|/√(p² − s²)·g(p) over |p| > s, with the inverse square
/// root removed by p = ±s·cosh u before integrating adaptively.
pub fn singular_split(g: impl Fn(f64) -> Complex64 + Copy, lo: f64, hi: f64, s: f64, tol: f64) -> Complex64 {
    if s == 0.0 {
        return adaptive(g, lo, hi, tol, 64);
    }
    let mut total = Complex64::new(0.0, 0.0);
    // Right branch p = s cosh u.
    let (a, b) = (lo.max(s), hi);
    if b > a {
        let (ua, ub) = ((a / s).acosh(), (b / s).acosh());
        total += adaptive(|u| g(s * u.cosh()) * (s * u.cosh()), ua, ub, tol, 64);
    }
    // Left branch p = −s cosh u.
    let (a, b) = (lo, hi.min(-s));
    if b > a {
        let (ua, ub) = ((-b / s).acosh(), (-a / s).acosh());
        total += adaptive(|u| g(-s * u.cosh()) * (s * u.cosh()), ua, ub, tol, 64);
    }
    total
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
