//! Conventional phase-space pictures of oscillator eigenstates, for
//! contrast with path distributions: Wigner functions, their marginals and
//! coherent-state overlaps.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::quadrature::{RealSum, UniformGrid};
use crate::specfun::{hermite_function, laguerre, HoConstants, MAX_DEGREE};

/// A point (x, p) of Wigner phase space. Here p is a Fourier momentum, not
/// a path label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpacePoint {
    pub x: f64,
    pub p: f64,
}

impl PhaseSpacePoint {
    pub fn new(x: f64, p: f64) -> Result<Self> {
        if !(x.is_finite() && p.is_finite()) {
            return domain(format!("phase-space point must be finite, got ({x}, {p})"));
        }
        Ok(PhaseSpacePoint { x, p })
    }
}

/// F_n(x, p) = ((−1)ⁿ/πħ) e^{−r} L_n(2r), r = Mωx²/ħ + p²/ħMω.
pub fn wigner(n: u32, pt: PhaseSpacePoint, c: &HoConstants) -> Result<f64> {
    c.validate()?;
    let mw = c.mass * c.omega;
    let r = mw * pt.x * pt.x / c.hbar + pt.p * pt.p / (c.hbar * mw);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / (PI * c.hbar) * (-r).exp() * laguerre(n, 2.0 * r)?)
}

fn trapezoid_over(grid: &UniformGrid, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut acc = RealSum::new();
    for (x, w) in grid.points().iter().zip(grid.trapezoid_weights()) {
        acc.add(w * f(*x)?);
    }
    Ok(acc.value())
}

fn warn_if_short(what: &str, grid: &UniformGrid, needed: f64) {
    if grid.lo() > -needed || grid.hi() < needed {
        log::warn!(
            "{what} grid [{}, {}] does not span ±{needed}; the marginal will miss tail mass",
            grid.lo(),
            grid.hi()
        );
    }
}

/// ∫ F_n(x, p) dx by trapezoid on `x_grid`, which should span
/// ±5√(2n+1)√(ħ/Mω).
pub fn wigner_momentum_marginal(n: u32, p: f64, c: &HoConstants, x_grid: &UniformGrid) -> Result<f64> {
    warn_if_short("x", x_grid, 5.0 * (2.0 * n as f64 + 1.0).sqrt() * c.length_scale());
    trapezoid_over(x_grid, |x| wigner(n, PhaseSpacePoint { x, p }, c))
}

/// ∫ F_n(x, p) dp by trapezoid on `p_grid`.
pub fn wigner_position_marginal(n: u32, x: f64, c: &HoConstants, p_grid: &UniformGrid) -> Result<f64> {
    warn_if_short("p", p_grid, 5.0 * (2.0 * n as f64 + 1.0).sqrt() * c.momentum_scale());
    trapezoid_over(p_grid, |p| wigner(n, PhaseSpacePoint { x, p }, c))
}

/// |ψ̃_n(p)|² = e^{−p²/ħMω} H_n(p/√(ħMω))² / (2ⁿ n! √(πħMω)).
pub fn momentum_density_analytic(n: u32, p: f64, c: &HoConstants) -> Result<f64> {
    c.validate()?;
    if n > MAX_DEGREE {
        return domain(format!("degree {n} exceeds {MAX_DEGREE}"));
    }
    let scale = c.momentum_scale();
    Ok(hermite_function(n, p / scale).powi(2) / scale)
}

/// ln n!; the exact product up to 20!, a sum of logarithms beyond.
pub fn ln_factorial(n: u32) -> f64 {
    let exact = (1..=u64::from(n.min(20))).product::<u64>() as f64;
    exact.ln() + (21..=n).map(|k| f64::from(k).ln()).sum::<f64>()
}

/// C_n(α) = |⟨α|n⟩|² = e^{−|α|²} |α|^{2n} / n!.
pub fn coherent_overlap(n: u32, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return domain(format!("|α| must be finite and non-negative, got {alpha}"));
    }
    if n > MAX_DEGREE {
        return domain(format!("degree {n} exceeds {MAX_DEGREE}"));
    }
    if alpha == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let a2 = alpha * alpha;
    Ok((-a2 + f64::from(n) * a2.ln() - ln_factorial(n)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: HoConstants = HoConstants { hbar: 1.0, mass: 1.0, omega: 1.0 };

    #[test]
    fn wigner_at_origin() {
        let o = PhaseSpacePoint::new(0.0, 0.0).unwrap();
        assert!((wigner(0, o, &C).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((wigner(1, o, &C).unwrap() + 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn ground_state_momentum_marginal() {
        let g = UniformGrid::symmetric(8.0, 0.01).unwrap();
        let v = wigner_momentum_marginal(0, 0.0, &C, &g).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-10);
        assert!(wigner_momentum_marginal(1, 0.0, &C, &g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn overlap_values() {
        assert_eq!(coherent_overlap(0, 0.0).unwrap(), 1.0);
        assert!((coherent_overlap(1, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(coherent_overlap(2, -1.0).is_err());
    }

    #[test]
    fn factorials() {
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-15);
        assert_eq!(ln_factorial(0), 0.0);
        // ln 25! from its exact value 15511210043330985984000000
        assert!((ln_factorial(25) - 1.551_121_004_333_098_6e25_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn analytic_density_is_normalized() {
        let g = UniformGrid::symmetric(12.0, 0.01).unwrap();
        for n in 0..4 {
            let s = trapezoid_over(&g, |p| momentum_density_analytic(n, p, &C)).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
