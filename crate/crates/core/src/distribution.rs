//! Path distributions: window averages weighted by ψ*(x_f) and integrated
//! over final positions, optionally averaged over one oscillator period,
//! plus moments and the change of variables to classical energy.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::phasor::WindowEvaluator;
use crate::quadrature::{smooth_step, ComplexSum, GridBundle, RealSum};
use crate::systems::EigenstateSpec;

/// Sample weights below this fraction of the largest |w·ψ| are skipped;
/// their contributions sit far below double-precision resolution.
const NEGLIGIBLE_WEIGHT: f64 = 1e-16;

/// 𝒫_j(p_c, T) or its period average, sampled on a p_c grid.
#[derive(Debug, Clone, Serialize)]
pub struct PathDistribution {
    pub p_c: Vec<f64>,
    pub values: Vec<Complex64>,
    pub state: EigenstateSpec,
    pub t: f64,
    pub time_averaged: bool,
    /// N = ∫|ψ|² dx_f over the same x_f grid.
    pub normalization: f64,
    pub grids: GridBundle,
}

/// Σ_x w_x ψ*(x) ΔF(p, x, t)/(2w) for every p on the grid, and N.
fn weighted_over_xf(state: &EigenstateSpec, t: f64, grids: &GridBundle, p_c: &[f64]) -> Result<(Vec<Complex64>, f64)> {
    let xs = grids.x_f.points();
    let wx = grids.x_f.trapezoid_weights();
    let mut weights = Vec::with_capacity(xs.len());
    let mut norm = RealSum::new();
    for (x, w) in xs.iter().zip(&wx) {
        let psi = state.eigenfunction(*x)?;
        norm.add(w * psi.norm_sqr());
        weights.push(psi.conj() * *w);
    }
    let norm = norm.value();
    if !(norm > 0.0) {
        return Err(Error::Degenerate("eigenfunction vanishes on the whole x_f grid".into()));
    }
    let biggest = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);

    let rows: Vec<Option<Vec<Complex64>>> = xs
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&x, &wpsi)| {
            if wpsi.norm() <= NEGLIGIBLE_WEIGHT * biggest {
                return Ok(None);
            }
            let eval = WindowEvaluator::for_grid(state, x, t, p_c, grids)?;
            Ok(Some(p_c.iter().map(|&p| wpsi * eval.window_average(p)).collect()))
        })
        .collect::<Result<_>>()?;

    let mut acc = vec![ComplexSum::new(); p_c.len()];
    for row in rows.iter().flatten() {
        for (a, v) in acc.iter_mut().zip(row) {
            a.add(*v);
        }
    }
    Ok((acc.iter().map(|a| a.value()).collect(), norm))
}

/// 𝒫_j(p_c, T) = (1/N) ∫ ψ*_j(x_f) ΔF_j(p_c, x_f, T)/(2w) dx_f on the grids
/// of `grids` (its time list is ignored).
pub fn spatial_average(state: &EigenstateSpec, t: f64, grids: &GridBundle) -> Result<PathDistribution> {
    let p_c = grids.p_c.points();
    let (sum, norm) = weighted_over_xf(state, t, grids, &p_c)?;
    Ok(PathDistribution {
        values: sum.iter().map(|v| v / norm).collect(),
        p_c,
        state: *state,
        t,
        time_averaged: false,
        normalization: norm,
        grids: grids.clone(),
    })
}

/// ⟨𝒫_n(p_c, T)⟩: the oscillator distribution averaged with equal weights
/// over the travel times listed in `grids`.
pub fn time_average(state: &EigenstateSpec, t: f64, grids: &GridBundle) -> Result<PathDistribution> {
    if !state.system().is_oscillator() {
        return domain(format!("time averaging applies to the oscillator, not the {} system", state.system().name()));
    }
    if grids.times.is_empty() {
        return domain("no travel times to average over");
    }
    let p_c = grids.p_c.points();
    let mut acc = vec![ComplexSum::new(); p_c.len()];
    let mut norm = 0.0;
    for &tp in &grids.times {
        let (sum, n) = weighted_over_xf(state, tp, grids, &p_c)?;
        norm = n;
        for (a, v) in acc.iter_mut().zip(&sum) {
            a.add(*v);
        }
    }
    let scale = 1.0 / (norm * grids.times.len() as f64);
    Ok(PathDistribution {
        values: acc.iter().map(|a| a.value() * scale).collect(),
        p_c,
        state: *state,
        t,
        time_averaged: true,
        normalization: norm,
        grids: grids.clone(),
    })
}

/// Summary numbers of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub norm: f64,
    pub mean: f64,
    pub peak_location: f64,
    pub fwhm: f64,
    pub max_im_ratio: f64,
}

impl PathDistribution {
    /// Trapezoid weights, rolled off smoothly at the grid edges when the
    /// grids ask for it.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let n = self.p_c.len();
        let mut w: Vec<f64> = (0..n)
            .map(|i| {
                let left = if i > 0 { self.p_c[i] - self.p_c[i - 1] } else { 0.0 };
                let right = if i + 1 < n { self.p_c[i + 1] - self.p_c[i] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect();
        if let Some(len) = self.grids.edge_taper {
            let (lo, hi) = (self.p_c[0], self.p_c[n - 1]);
            for (wi, p) in w.iter_mut().zip(&self.p_c) {
                *wi *= smooth_step((p - lo).min(hi - p) / len);
            }
        }
        w
    }

    /// Largest |Re| over the grid.
    pub fn max_re(&self) -> f64 {
        self.values.iter().map(|v| v.re.abs()).fold(0.0, f64::max)
    }

    /// Distribution over |p_c|: values at ±p summed (so 2𝒫(0) at the
    /// origin), one-sided grid from 0. Requires a grid symmetric about zero.
    pub fn folded(&self) -> Result<PathDistribution> {
        let n = self.p_c.len();
        let tol = 1e-9 * self.p_c[n - 1].abs().max(1.0);
        if (0..n).any(|i| (self.p_c[i] + self.p_c[n - 1 - i]).abs() > tol) {
            return domain("folding needs a p_c grid symmetric about zero");
        }
        let mid = n / 2;
        let mut p = Vec::with_capacity(n - mid);
        let mut v = Vec::with_capacity(n - mid);
        for j in mid..n {
            p.push(self.p_c[j]);
            v.push(self.values[j] + self.values[n - 1 - j]);
        }
        let mut out = self.clone();
        out.p_c = p;
        out.values = v;
        Ok(out)
    }
}

/// Norm and mean by trapezoid on Re 𝒫, peak by parabolic refinement, fwhm
/// by interpolated half-maximum crossings (measured out to the grid edge
/// when a crossing is missing).
pub fn moments(dist: &PathDistribution) -> Result<Moments> {
    let n = dist.values.len();
    if n == 0 {
        return domain("empty distribution");
    }
    let max_re = dist.max_re();
    let max_im = dist.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if max_re == 0.0 {
        return Err(Error::Degenerate("all real parts are zero".into()));
    }
    let w = dist.quadrature_weights();
    let (mut norm, mut first) = (RealSum::new(), RealSum::new());
    for ((p, v), wi) in dist.p_c.iter().zip(&dist.values).zip(&w) {
        norm.add(wi * v.re);
        first.add(wi * p * v.re);
    }
    let norm = norm.value();
    let mean = first.value() / norm;

    let re: Vec<f64> = dist.values.iter().map(|v| v.re).collect();
    let i = (0..n).fold(0, |b, j| if re[j] > re[b] { j } else { b });
    let mut peak = dist.p_c[i];
    if i > 0 && i + 1 < n {
        let (a, b, c) = (re[i - 1], re[i], re[i + 1]);
        let curv = a - 2.0 * b + c;
        if curv < 0.0 {
            let h = 0.5 * (dist.p_c[i + 1] - dist.p_c[i - 1]);
            peak += h * 0.5 * (a - c) / curv;
        }
    }
    let half = 0.5 * re[i];
    let mut left = dist.p_c[0];
    for j in (0..i).rev() {
        if re[j] < half {
            let t = (half - re[j]) / (re[j + 1] - re[j]);
            left = dist.p_c[j] + t * (dist.p_c[j + 1] - dist.p_c[j]);
            break;
        }
    }
    let mut right = dist.p_c[n - 1];
    for j in i + 1..n {
        if re[j] < half {
            let t = (re[j - 1] - half) / (re[j - 1] - re[j]);
            right = dist.p_c[j - 1] + t * (dist.p_c[j] - dist.p_c[j - 1]);
            break;
        }
    }
    Ok(Moments {
        norm,
        mean,
        peak_location: peak,
        fwhm: right - left,
        max_im_ratio: max_im / max_re,
    })
}

/// Density over classical energy E_c = p_c²/2M.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyDensity {
    /// E_c at each positive |p_c| sample; the lowest is (Δp_c)²/2M.
    pub energy: Vec<f64>,
    /// √(M/2E_c)·(Re𝒫(p) + Re𝒫(−p)).
    pub density: Vec<f64>,
    /// |p_c| samples including 0 when present.
    pub momentum: Vec<f64>,
    /// Re𝒫(p) + Re𝒫(−p) at each `momentum` sample.
    pub folded: Vec<f64>,
    pub mass: f64,
}

impl EnergyDensity {
    /// ∫ρ dE with each energy cell integrated exactly for a density that is
    /// linear in |p_c| (which absorbs the 1/√E_c weight, including the
    /// lowest cell down to E_c = 0). Equals the p_c-space trapezoid norm.
    pub fn total(&self) -> f64 {
        let mut acc = RealSum::new();
        for i in 1..self.momentum.len() {
            acc.add(0.5 * (self.momentum[i] - self.momentum[i - 1]) * (self.folded[i] + self.folded[i - 1]));
        }
        acc.value()
    }

    /// Plain trapezoid over the energy samples, starting at the lowest
    /// bin; misses the integrable 1/√E_c spike below it.
    pub fn trapezoid_in_energy(&self) -> f64 {
        let mut acc = RealSum::new();
        for i in 1..self.energy.len() {
            acc.add(0.5 * (self.energy[i] - self.energy[i - 1]) * (self.density[i] + self.density[i - 1]));
        }
        acc.value()
    }
}

/// Change of variables p_c → E_c with the √(M/2E_c) Jacobian.
/// The grid must be symmetric about 0 or lie entirely at p_c ≥ 0 (already
/// a distribution over |p_c|).
pub fn to_energy_density(dist: &PathDistribution) -> Result<EnergyDensity> {
    let one_sided = dist.p_c[0] >= 0.0;
    let src = if one_sided { dist.clone() } else { dist.folded()? };
    let mass = dist.state.system().inertia();
    let mut energy = Vec::new();
    let mut density = Vec::new();
    for (p, v) in src.p_c.iter().zip(&src.values) {
        if *p > 0.0 {
            let e = p * p / (2.0 * mass);
            energy.push(e);
            density.push((mass / (2.0 * e)).sqrt() * v.re);
        }
    }
    if energy.is_empty() {
        return domain("no positive momenta to map to energies");
    }
    Ok(EnergyDensity {
        energy,
        density,
        momentum: src.p_c.clone(),
        folded: src.values.iter().map(|v| v.re).collect(),
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{GridOverrides, UniformGrid};
    use crate::specfun::HoConstants;
    use crate::systems::SystemSpec;

    fn fake(p: Vec<f64>, v: Vec<f64>) -> PathDistribution {
        let state = EigenstateSpec::ho(0, HoConstants::natural()).unwrap();
        let grids = crate::quadrature::oscillator_grids(&state, 10.0, &GridOverrides::default()).unwrap();
        PathDistribution {
            values: v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            p_c: p,
            state,
            t: 10.0,
            time_averaged: false,
            normalization: 1.0,
            grids,
        }
    }

    #[test]
    fn zero_distribution_is_degenerate() {
        let d = fake(vec![0.0, 1.0, 2.0], vec![0.0; 3]);
        assert!(matches!(moments(&d), Err(Error::Degenerate(_))));
    }

    #[test]
    fn symmetric_two_peaks_have_zero_mean() {
        let g = UniformGrid::symmetric(4.0, 0.01).unwrap();
        let p = g.points();
        let v = p
            .iter()
            .map(|x: &f64| (-(x - 2.0) * (x - 2.0) * 50.0).exp() + (-(x + 2.0) * (x + 2.0) * 50.0).exp())
            .collect();
        let m = moments(&fake(p, v)).unwrap();
        assert!(m.mean.abs() < 1e-12);
        assert!((m.peak_location.abs() - 2.0).abs() < 1e-4);
        // Gaussian e^{−50u²}: fwhm = 2√(ln2/50)
        assert!((m.fwhm - 2.0 * (2f64.ln() / 50.0).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn flat_distribution_maps_to_inverse_root_energy() {
        let g = UniformGrid::symmetric(2.0, 0.01).unwrap();
        let p = g.points();
        let v = p.iter().map(|x| if x.abs() <= 1.5 { 1.0 } else { 0.0 }).collect();
        let e = to_energy_density(&fake(p, v)).unwrap();
        for (en, d) in e.energy.iter().zip(&e.density) {
            if *en < 1.0 {
                assert!((d * en.sqrt() - 2f64.sqrt()).abs() < 1e-12);
            }
        }
        assert!((e.energy[0] - 0.5e-4).abs() < 1e-15);
    }

    #[test]
    fn energy_total_matches_momentum_norm() {
        let g = UniformGrid::symmetric(3.0, 0.02).unwrap();
        let p = g.points();
        let v: Vec<f64> = p.iter().map(|x| (-(x.abs() - 1.0).powi(2) * 8.0).exp()).collect();
        let d = fake(p, v);
        let e = to_energy_density(&d).unwrap();
        let mut n = RealSum::new();
        for (w, v) in d.quadrature_weights().iter().zip(&d.values) {
            n.add(w * v.re);
        }
        assert!((e.total() - n.value()).abs() < 1e-12 * n.value());
    }

    #[test]
    fn time_average_rejects_stationary_systems() {
        let s = EigenstateSpec::from_number(SystemSpec::free_line(1.0, 1.0).unwrap(), 1.0).unwrap();
        let g = GridBundle::for_state(&s, 100.0, &GridOverrides::default()).unwrap();
        assert!(time_average(&s, 100.0, &g).is_err());
    }
}
