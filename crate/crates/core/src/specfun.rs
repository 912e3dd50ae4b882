//! Special functions: Hermite and Laguerre polynomials, oscillator
//! eigenfunctions, and the Gaussian phase integral ∫ exp(iγu²) du.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest polynomial degree accepted. Recurrences are fine well beyond
/// this, but nothing in the pipeline needs more and a loud failure beats
/// silent garbage from a typo'd quantum number.
pub const MAX_DEGREE: u32 = 64;

fn check_degree(n: u32) -> Result<()> {
    if n > MAX_DEGREE {
        return domain(format!("polynomial degree {n} exceeds the limit of {MAX_DEGREE}"));
    }
    Ok(())
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: u32, x: f64) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    for m in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(m) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Laguerre polynomial L_n(x).
pub fn laguerre(n: u32, x: f64) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    for m in 1..n {
        let m = f64::from(m);
        let next = ((2.0 * m + 1.0 - x) * cur - m * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Physical constants of a harmonic oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoConstants {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl HoConstants {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        let c = HoConstants { hbar, mass, omega };
        c.validate()?;
        Ok(c)
    }

    /// ħ = M = ω = 1.
    pub fn natural() -> Self {
        HoConstants {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }

    /// Oscillator length √(ħ/Mω).
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Oscillator momentum √(ħMω).
    pub fn momentum_scale(&self) -> f64 {
        (self.hbar * self.mass * self.omega).sqrt()
    }

    /// E_n = (n + ½)ħω.
    pub fn energy(&self, n: u32) -> f64 {
        (f64::from(n) + 0.5) * self.hbar * self.omega
    }
}

/// Normalized Hermite function e^{−ξ²/2} H_n(ξ) / √(2ⁿ n! √π), built by the
/// normalized recurrence so that neither 2ⁿn! nor H_n itself is formed.
pub(crate) fn hermite_function(n: u32, xi: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * xi * prev;
    for m in 1..n {
        let m = f64::from(m);
        let next = (2.0 / (m + 1.0)).sqrt() * xi * cur - (m / (m + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized oscillator eigenfunction ψ_n(x).
pub fn ho_eigenfunction(n: u32, x: f64, c: &HoConstants) -> Result<f64> {
    check_degree(n)?;
    c.validate()?;
    let alpha = c.mass * c.omega / c.hbar;
    Ok(alpha.powf(0.25) * hermite_function(n, alpha.sqrt() * x))
}

/// ∫_a^b exp(iγu²) du.
///
/// Infinite limits are accepted. γ = 0 gives b − a. Reversed limits give
/// the negated integral rather than an error.
pub fn gaussian_phase_integral(a: f64, b: f64, gamma: f64) -> Complex64 {
    if gamma == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    if gamma < 0.0 {
        return gaussian_phase_integral(a, b, -gamma).conj();
    }
    if a > b {
        return -gaussian_phase_integral(b, a, gamma);
    }
    let s = gamma.sqrt();
    fresnel_between(s * a, s * b) / s
}

// Below this |x| the Maclaurin series for ∫_0^x e^{iv²} dv is used; above
// it the continued fraction for w(z) converges quickly.
const SERIES_LIMIT: f64 = 3.0;

fn half_sqrt_pi_rot() -> Complex64 {
    Complex64::from_polar(0.5 * PI.sqrt(), FRAC_PI_4)
}

/// ∫_x^y e^{iv²} dv for x < y, arranged so that no large constants cancel.
fn fresnel_between(x: f64, y: f64) -> Complex64 {
    if x >= SERIES_LIMIT {
        return tail_difference(x, y);
    }
    if y <= -SERIES_LIMIT {
        // The integrand is even.
        return tail_difference(-y, -x);
    }
    fresnel_primitive(y) - fresnel_primitive(x)
}

// ∫_x^y e^{iv²} dv with SERIES_LIMIT ≤ x < y.
fn tail_difference(x: f64, y: f64) -> Complex64 {
    if y.is_finite() && (y * y - x * x) <= 2.0 {
        // Short span: a direct rule avoids subtracting two nearly equal tails.
        return gauss_legendre(x, y, |v| Complex64::from_polar(1.0, v * v));
    }
    fresnel_tail(x) - fresnel_tail(y)
}

/// ∫_0^x e^{iv²} dv, odd in x.
fn fresnel_primitive(x: f64) -> Complex64 {
    let ax = x.abs();
    let mag = if ax < SERIES_LIMIT {
        fresnel_series(ax)
    } else {
        half_sqrt_pi_rot() - fresnel_tail(ax)
    };
    if x < 0.0 {
        -mag
    } else {
        mag
    }
}

fn fresnel_series(x: f64) -> Complex64 {
    let i_x2 = Complex64::new(0.0, x * x);
    let mut term = Complex64::new(x, 0.0);
    let mut sum = term;
    for k in 1..200u32 {
        term = term * i_x2 / f64::from(k);
        let contrib = term / f64::from(2 * k + 1);
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// ∫_x^∞ e^{iv²} dv for x ≥ SERIES_LIMIT (or +∞), through
/// e^{iπ/4}(√π/2) e^{ix²} w(e^{iπ/4}x).
fn fresnel_tail(x: f64) -> Complex64 {
    if x.is_infinite() {
        return Complex64::new(0.0, 0.0);
    }
    let z = Complex64::from_polar(x, FRAC_PI_4);
    half_sqrt_pi_rot() * Complex64::from_polar(1.0, x * x) * faddeeva_cf(z)
}

/// Faddeeva function w(z) = e^{−z²} erfc(−iz) for Im z > 0 and |z| ≳ 2,
/// from the Laplace continued fraction
/// w(z) = (i/√π) / (z − ½/(z − 1/(z − (3/2)/(z − …)))),
/// evaluated with the modified Lentz algorithm.
pub(crate) fn faddeeva_cf(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = z;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..5000u32 {
        let a = -0.5 * f64::from(k);
        d = z + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        d = d.inv();
        c = z + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    Complex64::new(0.0, 1.0 / PI.sqrt()) / f
}

const GL_ORDER: usize = 24;

fn gauss_legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_nodes(GL_ORDER))
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
pub(crate) fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    for &(x, w) in gauss_legendre_rule() {
        s += w * f(mid + half * x);
    }
    s * half
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite(3, 1.0).unwrap(), -4.0);
        assert!(hermite(65, 0.1).is_err());
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 5.0).unwrap(), 1.0);
        assert_eq!(laguerre(1, 2.0).unwrap(), -1.0);
        assert_eq!(laguerre(2, 0.0).unwrap(), 1.0);
        // L_3(x) = (−x³ + 9x² − 18x + 6)/6
        let x: f64 = 2.5;
        let exact = (-x.powi(3) + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
        assert!(close(laguerre(3, x).unwrap(), exact, 1e-14));
    }

    #[test]
    fn eigenfunction_values() {
        let c = HoConstants::natural();
        assert!(close(ho_eigenfunction(0, 0.0, &c).unwrap(), PI.powf(-0.25), 1e-15));
        assert_eq!(ho_eigenfunction(1, 0.0, &c).unwrap(), 0.0);
        assert!(HoConstants::new(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn eigenfunction_matches_hermite_form() {
        let c = HoConstants::new(1.3, 0.7, 2.1).unwrap();
        let alpha: f64 = c.mass * c.omega / c.hbar;
        for n in 0..8u32 {
            let fact: f64 = (1..=n).map(f64::from).product();
            for &x in &[-1.7, -0.2, 0.0, 0.4, 2.2] {
                let xi = alpha.sqrt() * x;
                let direct = (alpha / PI).powf(0.25) * (-0.5 * xi * xi).exp() * hermite(n, xi).unwrap()
                    / (2f64.powi(n as i32) * fact).sqrt();
                let got = ho_eigenfunction(n, x, &c).unwrap();
                assert!((got - direct).abs() < 1e-13, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn gaussian_phase_integral_degenerate_cases() {
        assert_eq!(gaussian_phase_integral(0.0, 0.0, 5.0), Complex64::new(0.0, 0.0));
        assert_eq!(gaussian_phase_integral(-1.0, 2.0, 0.0), Complex64::new(3.0, 0.0));
        let full = gaussian_phase_integral(f64::NEG_INFINITY, f64::INFINITY, 2.0);
        let exact = Complex64::from_polar((PI / 2.0).sqrt(), FRAC_PI_4);
        assert!((full - exact).norm() < 1e-14);
    }

    #[test]
    fn series_and_fraction_agree_at_the_switch() {
        for &x in &[2.0, 2.5, 3.0, 3.5] {
            let series = fresnel_series(x);
            let cf = half_sqrt_pi_rot() - fresnel_tail(x);
            assert!((series - cf).norm() < 1e-12, "x={x}: {series} vs {cf}");
        }
    }

    #[test]
    fn reversed_limits_negate() {
        let f = gaussian_phase_integral(0.3, 1.9, 4.0);
        let r = gaussian_phase_integral(1.9, 0.3, 4.0);
        assert!((f + r).norm() < 1e-15);
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = legendre_nodes(GL_ORDER);
        let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-15);
    }
}
