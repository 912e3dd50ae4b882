//! Wavefunctions rebuilt from path contributions: full and band-limited
//! p_c integrals of the window average, plus the phase bookkeeping along
//! the dominant free-particle path.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::phasor::WindowEvaluator;
use crate::quadrature::{ComplexSum, GridBundle};
use crate::systems::{EigenstateSpec, SystemKind};

/// Range of |p_c| kept in a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Band {
    /// (0, p₂) with p₂ large enough to reproduce the eigenfunction.
    Full,
    /// (p₁, p₂) with 0 ≤ p₁ ≤ p₂; p₁ = p₂ is an empty band.
    Range(f64, f64),
}

impl Band {
    /// Concrete (p₁, p₂) for a state and grid bundle.
    pub fn resolve(&self, state: &EigenstateSpec, grids: &GridBundle) -> Result<(f64, f64)> {
        match *self {
            Band::Full => Ok((0.0, full_band_limit(state, grids))),
            Band::Range(lo, hi) => {
                if !(lo.is_finite() && hi.is_finite() && lo >= 0.0) {
                    return domain(format!("band limits must be finite with p1 >= 0, got ({lo}, {hi})"));
                }
                if lo > hi {
                    return domain(format!("band needs p1 <= p2, got ({lo}, {hi})"));
                }
                Ok((lo, hi))
            }
        }
    }
}

/// Upper |p_c| used for [`Band::Full`]. The oscillator uses 10√(ħMω) through
/// n = 3 and grows like √(2ME_n) beyond; the stationary systems use the
/// edge of their p_c grid.
pub fn full_band_limit(state: &EigenstateSpec, grids: &GridBundle) -> f64 {
    match state.system().ho_constants() {
        Some(c) => {
            let n = state.level().unwrap_or(0) as f64;
            10.0 * c.momentum_scale() * ((2.0 * n + 1.0) / 7.0).sqrt().max(1.0)
        }
        None => grids.p_c.max_abs(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub x_f: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Resolved (p₁, p₂).
    pub band: (f64, f64),
    pub full: bool,
    pub state: EigenstateSpec,
    pub t: f64,
    pub time_averaged: bool,
}

/// ∫ over [a, b] of the piecewise-linear interpolant through `ys`, sampled
/// at origin + i·step.
fn linear_integral(origin: f64, step: f64, ys: &[Complex64], a: f64, b: f64) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let at = |u: f64| -> (usize, f64) {
        let r = ((u - origin) / step).clamp(0.0, (ys.len() - 1) as f64);
        let i = (r.floor() as usize).min(ys.len() - 2);
        (i, r - i as f64)
    };
    let lerp = |i: usize, f: f64| ys[i] * (1.0 - f) + ys[i + 1] * f;
    let (ia, fa) = at(a);
    let (ib, fb) = at(b);
    let mut acc = ComplexSum::new();
    if ia == ib {
        acc.add((lerp(ia, fa) + lerp(ib, fb)) * (0.5 * (fb - fa) * step));
        return acc.value();
    }
    acc.add((lerp(ia, fa) + ys[ia + 1]) * (0.5 * (1.0 - fa) * step));
    for i in ia + 1..ib {
        acc.add((ys[i] + ys[i + 1]) * (0.5 * step));
    }
    acc.add((ys[ib] + lerp(ib, fb)) * (0.5 * fb * step));
    acc.value()
}

/// One reconstruction per band, sharing the window tables between bands.
/// The oscillator result is averaged over the travel times of `grids`.
pub fn reconstruct_bands(state: &EigenstateSpec, bands: &[Band], t: f64, grids: &GridBundle) -> Result<Vec<ReconstructionResult>> {
    let resolved: Vec<(f64, f64)> = bands.iter().map(|b| b.resolve(state, grids)).collect::<Result<_>>()?;
    let oscillator = state.system().is_oscillator();
    let times: Vec<f64> = if oscillator { grids.times.clone() } else { vec![t] };
    let p_max = resolved.iter().map(|r| r.1).fold(0.0, f64::max);
    let step = grids.p_c.step;
    let half = (p_max / step).ceil() as i64 + 1;
    let nodes: Vec<f64> = (-half..=half).map(|i| i as f64 * step).collect();
    let origin = -(half as f64) * step;
    let xs = grids.x_f.points();

    let rows: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let mut acc = vec![ComplexSum::new(); resolved.len()];
            for &tp in &times {
                let w = state.system().window_halfwidth(tp);
                let eval = WindowEvaluator::new(state, x, tp, origin - w, -origin + w, grids)?;
                let ys: Vec<Complex64> = nodes.iter().map(|&p| eval.window_average(p)).collect();
                for (a, &(p1, p2)) in acc.iter_mut().zip(&resolved) {
                    a.add(linear_integral(origin, step, &ys, p1, p2));
                    a.add(linear_integral(origin, step, &ys, -p2, -p1));
                }
            }
            let scale = 1.0 / times.len() as f64;
            Ok(acc.iter().map(|a| a.value() * scale).collect())
        })
        .collect::<Result<_>>()?;

    Ok(resolved
        .iter()
        .enumerate()
        .map(|(k, &band)| ReconstructionResult {
            x_f: xs.clone(),
            values: rows.iter().map(|r| r[k]).collect(),
            band,
            full: bands[k] == Band::Full,
            state: *state,
            t,
            time_averaged: oscillator,
        })
        .collect())
}

/// ∫ over |p_c| ∈ (p₁, p₂) of the window average at every x_f of `grids`.
pub fn reconstruct(state: &EigenstateSpec, band: Band, t: f64, grids: &GridBundle) -> Result<ReconstructionResult> {
    Ok(reconstruct_bands(state, &[band], t, grids)?.remove(0))
}

/// One sample along a dominant free-particle path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathPoint {
    pub t: f64,
    pub x: f64,
    /// Energy phase + initial wavefunction phase + amplitude phase, in [0, 2π).
    pub phase: f64,
}

/// Position and accumulated phase along the path with p_c = ħk leaving x₀.
/// At every t the phase equals k·x(t) mod 2π.
pub fn dominant_path_phase(state: &EigenstateSpec, x0: f64, t_grid: &[f64]) -> Result<Vec<PathPoint>> {
    let sys = state.system();
    if sys.kind != SystemKind::FreeLine {
        return domain(format!("dominant-path phases are defined for the free line, not the {} system", sys.name()));
    }
    let k = state.wavenumber().unwrap_or(0.0);
    let (hbar, m) = (sys.hbar, sys.mass);
    let p = hbar * k;
    t_grid
        .iter()
        .map(|&t| {
            if !(t.is_finite() && t >= 0.0) {
                return domain(format!("elapsed time must be non-negative, got {t}"));
            }
            let energy = hbar * k * k * t / (2.0 * m);
            let amplitude = p * p * t / (2.0 * hbar * m);
            Ok(PathPoint {
                t,
                x: x0 + p * t / m,
                phase: (energy + k * x0 + amplitude).rem_euclid(TAU),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GridOverrides;
    use crate::systems::SystemSpec;

    fn free(k: f64) -> EigenstateSpec {
        EigenstateSpec::from_number(SystemSpec::free_line(1.0, 1.0).unwrap(), k).unwrap()
    }

    #[test]
    fn linear_integral_is_exact_for_lines() {
        let ys: Vec<Complex64> = (0..11).map(|i| Complex64::new(i as f64 * 0.1, 1.0)).collect();
        // y = p on [0, 1]
        let v = linear_integral(0.0, 0.1, &ys, 0.23, 0.87);
        assert!((v.re - 0.5 * (0.87f64.powi(2) - 0.23f64.powi(2))).abs() < 1e-14);
        assert!((v.im - 0.64).abs() < 1e-14);
        let v = linear_integral(0.0, 0.1, &ys, 0.31, 0.34);
        assert!((v.im - 0.03).abs() < 1e-14);
    }

    #[test]
    fn empty_band_is_zero_and_reversed_band_errors() {
        let s = free(1.0);
        let g = GridBundle::for_state(&s, 100.0, &GridOverrides::default()).unwrap();
        let r = reconstruct(&s, Band::Range(0.5, 0.5), 100.0, &g).unwrap();
        assert!(r.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        assert!(reconstruct(&s, Band::Range(0.6, 0.5), 100.0, &g).is_err());
    }

    #[test]
    fn free_full_band_reproduces_plane_wave() {
        let s = free(1.0);
        let g = GridBundle::for_state(&s, 100.0, &GridOverrides::default()).unwrap();
        let r = reconstruct(&s, Band::Full, 100.0, &g).unwrap();
        for (x, v) in r.x_f.iter().zip(&r.values) {
            assert!((v - Complex64::from_polar(1.0, *x)).norm() < 2e-2, "x={x}: {v}");
        }
    }

    #[test]
    fn path_phase_tracks_wavefunction() {
        let s = free(1.3);
        let pts = dominant_path_phase(&s, -4.0, &[0.0, 1.0, 7.5]).unwrap();
        for p in &pts {
            let expect = (1.3 * p.x).rem_euclid(TAU);
            let d = (p.phase - expect).abs();
            assert!(d < 1e-12 || (TAU - d) < 1e-12);
        }
        assert!((pts[0].phase - (1.3f64 * -4.0).rem_euclid(TAU)).abs() < 1e-15);
        let ho = EigenstateSpec::ho(0, crate::HoConstants::natural()).unwrap();
        assert!(dominant_path_phase(&ho, 0.0, &[1.0]).is_err());
    }
}
