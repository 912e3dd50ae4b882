//! Deterministic quadrature: compensated trapezoid sums, the patched rule
//! for the |p|/√(p² − s²) endpoint divergence, and grid construction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::systems::{radial, EigenstateSpec, SystemKind};

/// Neumaier-compensated running sum of real numbers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealSum {
    sum: f64,
    comp: f64,
}

impl RealSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated running sum of complex numbers, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: RealSum,
    im: RealSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Trapezoid rule over explicit samples, summed in ascending order.
pub fn trapezoid(samples: &[(f64, Complex64)]) -> Result<Complex64> {
    if samples.len() < 2 {
        return domain(format!("trapezoid needs at least 2 samples, got {}", samples.len()));
    }
    let mut acc = ComplexSum::new();
    for pair in samples.windows(2) {
        let (x0, f0) = pair[0];
        let (x1, f1) = pair[1];
        if !(x1 > x0) {
            return domain(format!("abscissae must be strictly increasing ({x0} then {x1})"));
        }
        acc.add(0.5 * (x1 - x0) * (f0 + f1));
    }
    Ok(acc.value())
}

/// Uniform grid of points `origin + i·step` for i in `first .. first + len`.
///
/// Points are always formed from the integer index, so a grid built with
/// [`UniformGrid::symmetric`] is exactly symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub origin: f64,
    pub step: f64,
    pub first: i64,
    pub len: usize,
}

// Tolerance for deciding that a range is an integer number of steps.
const STEP_SNAP: f64 = 1e-9;

impl UniformGrid {
    /// Points i·step with |i·step| ≤ half (to within rounding).
    pub fn symmetric(half: f64, step: f64) -> Result<Self> {
        Self::centered(0.0, half, step)
    }

    /// Points center + i·step with |i·step| ≤ half.
    pub fn centered(center: f64, half: f64, step: f64) -> Result<Self> {
        check_step(step)?;
        if !(half.is_finite() && half > 0.0) {
            return domain(format!("grid half-extent must be positive, got {half}"));
        }
        let n = (half / step + STEP_SNAP).floor() as i64;
        if n < 1 {
            return domain(format!("grid step {step} exceeds half-extent {half}"));
        }
        Ok(UniformGrid {
            origin: center,
            step,
            first: -n,
            len: (2 * n + 1) as usize,
        })
    }

    /// Points lo + i·step up to hi (included when hi − lo is a whole number
    /// of steps).
    pub fn span(lo: f64, hi: f64, step: f64) -> Result<Self> {
        check_step(step)?;
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return domain(format!("grid range [{lo}, {hi}] is empty"));
        }
        let n = ((hi - lo) / step + STEP_SNAP).floor() as usize;
        if n < 1 {
            return domain(format!("grid step {step} exceeds range [{lo}, {hi}]"));
        }
        Ok(UniformGrid {
            origin: lo,
            step,
            first: 0,
            len: n + 1,
        })
    }

    /// `count` points spanning [lo, hi] inclusive.
    pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return domain("a grid needs at least 2 points");
        }
        Self::span(lo, hi, (hi - lo) / (count - 1) as f64).map(|mut g| {
            g.len = count;
            g
        })
    }

    #[inline]
    pub fn value(&self, j: usize) -> f64 {
        self.origin + (self.first + j as i64) as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.value(j)).collect()
    }

    pub fn lo(&self) -> f64 {
        self.value(0)
    }

    pub fn hi(&self) -> f64 {
        self.value(self.len - 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.lo().abs().max(self.hi().abs())
    }

    /// Trapezoid weights for this grid.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.len];
        w[0] *= 0.5;
        w[self.len - 1] *= 0.5;
        w
    }
}

fn check_step(step: f64) -> Result<()> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        domain(format!("grid spacing must be positive, got {step}"))
    }
}

/// Rule for the inner momentum spacing Δp′ = w / n_p′ used under each
/// averaging window of half-width w, with
/// n_p′(x_f) = max(min_per_window, slope·|x_f| / x_scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerSpacing {
    pub min_per_window: f64,
    pub slope: f64,
    pub x_scale: f64,
}

impl InnerSpacing {
    pub fn points_per_window(&self, xf: f64) -> f64 {
        self.min_per_window.max(self.slope * xf.abs() / self.x_scale)
    }

    pub fn spacing(&self, halfwidth: f64, xf: f64) -> f64 {
        halfwidth / self.points_per_window(xf)
    }
}

/// Every discretization parameter of one computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBundle {
    /// Characteristic-momentum grid on which distributions are reported.
    pub p_c: UniformGrid,
    /// Final-position grid for spatial averages and reconstructions.
    pub x_f: UniformGrid,
    /// Travel times. One entry for a bare computation, the midpoint samples
    /// of one period for an oscillator time average.
    pub times: Vec<f64>,
    /// Inner spacing under each window (oscillator only).
    pub inner: InnerSpacing,
    /// Patch width at the divergence; `None` means one inner step.
    pub epsilon: Option<f64>,
    /// Winding or image terms on each side (circle and square well).
    pub images: Option<u32>,
    /// Length of the smooth roll-off applied at each edge of the p_c grid
    /// when integrating a distribution. Used for the stationary systems,
    /// whose windowed integrands decay only algebraically.
    pub edge_taper: Option<f64>,
}

impl GridBundle {
    pub fn epsilon_for(&self, spacing: f64) -> f64 {
        self.epsilon.unwrap_or(spacing)
    }

    fn validate(&self) -> Result<()> {
        if self.times.is_empty() {
            return domain("no travel times in grid bundle");
        }
        if let Some(e) = self.epsilon {
            if !(e.is_finite() && e > 0.0) {
                return domain(format!("patch width must be positive, got {e}"));
            }
        }
        for t in &self.times {
            if !(t.is_finite() && *t > 0.0) {
                return domain(format!("travel time must be positive, got {t}"));
            }
        }
        Ok(())
    }

    /// Builds the default grids for any state: [`oscillator_grids`] for the
    /// oscillator, [`stationary_grids`] otherwise.
    pub fn for_state(state: &EigenstateSpec, t: f64, ov: &GridOverrides) -> Result<Self> {
        if state.system().is_oscillator() {
            oscillator_grids(state, t, ov)
        } else {
            stationary_grids(state, t, ov)
        }
    }
}

/// Optional replacements for individual grid parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridOverrides {
    pub dp_c: Option<f64>,
    pub p_c_max: Option<f64>,
    pub dx_f: Option<f64>,
    pub x_f_max: Option<f64>,
    pub dt: Option<f64>,
    pub n_t: Option<usize>,
    pub epsilon: Option<f64>,
    pub n_p_min: Option<f64>,
    pub n_p_slope: Option<f64>,
    pub images: Option<u32>,
}

/// Oscillator grids: midpoint time samples T + (j + ½)π/16ω over one
/// period, Δx_f = 0.1 on ±5√(2n+1), n_p′ = max(50, 150|x_f|/√(2n+1)),
/// Δp_c = 0.01 (lengths in units of √(ħ/Mω), momenta of √(ħMω)). The p_c
/// grid stops where the time sampling stops resolving the path phases.
pub fn oscillator_grids(state: &EigenstateSpec, t: f64, ov: &GridOverrides) -> Result<GridBundle> {
    let Some(c) = state.system().ho_constants() else {
        return domain(format!("oscillator grids apply to the oscillator only, not the {} system", state.system().name()));
    };
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("travel time must be positive, got {t}"));
    }
    let n = state.level().unwrap();
    let root = f64::from(2 * n + 1).sqrt();
    let (len, mom) = (c.length_scale(), c.momentum_scale());

    let x_f = UniformGrid::symmetric(
        ov.x_f_max.unwrap_or(5.0 * root * len),
        ov.dx_f.unwrap_or(0.1 * len),
    )?;
    let dt = ov.dt.unwrap_or(PI / (16.0 * c.omega));
    let n_t = ov.n_t.unwrap_or(32);
    if n_t == 0 || !(dt.is_finite() && dt > 0.0) {
        return domain("time sampling needs a positive step and at least one sample");
    }
    let times = (0..n_t).map(|j| t + (j as f64 + 0.5) * dt).collect();

    let w = state.system().window_halfwidth(t);
    // Along a path the action changes with travel time at the rate
    // −p_c²/2M, so time samples ΔT apart resolve the period average only
    // for p_c² ΔT/2Mħ < π. Beyond that the midpoint sum aliases.
    let resolved = 0.95 * (2.0 * PI * c.hbar * c.mass / dt).sqrt();
    let p_max = ov
        .p_c_max
        .unwrap_or_else(|| (c.mass * c.omega * x_f.max_abs() + 10.0 * w).min(resolved));
    let p_c = UniformGrid::symmetric(p_max, ov.dp_c.unwrap_or(0.01 * mom))?;

    let g = GridBundle {
        p_c,
        x_f,
        times,
        inner: InnerSpacing {
            min_per_window: ov.n_p_min.unwrap_or(50.0),
            slope: ov.n_p_slope.unwrap_or(150.0),
            x_scale: root * len,
        },
        epsilon: ov.epsilon,
        images: None,
        edge_taper: None,
    };
    g.validate()?;
    Ok(g)
}

/// Grids for the free line, circle, hard wall and square well.
///
/// The p_c grid has spacing w/10 (w the window half-width) and reaches
/// min(50w, 0.95·πħI/(TΔp_c)) past the stationary momenta; the second bound
/// keeps the e^{iγ(p−ħk)²} chirp resolved by the grid. The outer half of
/// that reach carries the smooth edge taper used when integrating.
pub fn stationary_grids(state: &EigenstateSpec, t: f64, ov: &GridOverrides) -> Result<GridBundle> {
    let sys = state.system();
    if sys.is_oscillator() {
        return domain("stationary grids do not apply to the oscillator");
    }
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("travel time must be positive, got {t}"));
    }
    let w = sys.window_halfwidth(t);
    let dp = ov.dp_c.unwrap_or(0.1 * w);
    check_step(dp)?;
    let nyquist = PI * sys.hbar * sys.inertia() / (t * dp);
    let reach = (50.0 * w).min(0.95 * nyquist);
    let p0 = state.stationary_momentum();
    let k = state.wavenumber().unwrap();

    let p_c = match sys.kind {
        SystemKind::FreeLine | SystemKind::Circle { .. } => match ov.p_c_max {
            Some(pm) => UniformGrid::symmetric(pm, dp)?,
            None => UniformGrid::centered(p0, reach, dp)?,
        },
        _ => UniformGrid::symmetric(ov.p_c_max.unwrap_or(p0.abs() + reach), dp)?,
    };

    let x_f = match sys.kind {
        SystemKind::FreeLine => {
            let x = ov.x_f_max.unwrap_or(if k == 0.0 { 1.0 } else { 2.0 * PI / k.abs() });
            UniformGrid::symmetric(x, ov.dx_f.unwrap_or(x / 64.0))?
        }
        SystemKind::HardWall => {
            let x = ov.x_f_max.unwrap_or(20.0 * PI / k);
            UniformGrid::span(0.0, x, ov.dx_f.unwrap_or(x / 640.0))?
        }
        SystemKind::Circle { .. } => UniformGrid::span(0.0, 2.0 * PI, ov.dx_f.unwrap_or(2.0 * PI / 128.0))?,
        SystemKind::SquareWell { width } => UniformGrid::span(0.0, width, ov.dx_f.unwrap_or(width / 400.0))?,
        SystemKind::HarmonicOscillator { .. } => unreachable!(),
    };

    let images = match sys.kind {
        SystemKind::Circle { .. } | SystemKind::SquareWell { .. } => Some(
            ov.images
                .unwrap_or_else(|| default_image_terms(state, p_c.max_abs() + w, t)),
        ),
        _ => None,
    };

    let g = GridBundle {
        p_c,
        x_f,
        times: vec![t],
        inner: InnerSpacing {
            min_per_window: ov.n_p_min.unwrap_or(50.0),
            slope: ov.n_p_slope.unwrap_or(0.0),
            x_scale: 1.0,
        },
        epsilon: ov.epsilon,
        images,
        edge_taper: if ov.p_c_max.is_some() { None } else { Some(0.5 * reach) },
    };
    g.validate()?;
    Ok(g)
}

/// N_w = ⌈p_max T / (2aM)⌉ + 8, with 2a replaced by 2πR (so aM by πI) on
/// the circle.
pub fn default_image_terms(state: &EigenstateSpec, p_max: f64, t: f64) -> u32 {
    let sys = state.system();
    let per_term = match sys.kind {
        SystemKind::Circle { .. } => 2.0 * PI * sys.inertia(),
        SystemKind::SquareWell { width } => 2.0 * width * sys.mass,
        _ => return 0,
    };
    (p_max * t / per_term).ceil() as u32 + crate::systems::DEFAULT_IMAGE_TERMS
}

/// Width-weighted frozen-factor integral √(ε(ε + 2s)) of |p|/√(p² − s²)
/// over the first ε beyond either divergence.
pub fn patch_weight(epsilon: f64, s: f64) -> f64 {
    (epsilon * (epsilon + 2.0 * s)).sqrt()
}

/// Cumulative integral on one side of the excluded gap, in the outward
/// coordinate u = |p|, tabulated at u_i = u0 + iΔ.
#[derive(Debug, Clone)]
struct Branch {
    u0: f64,
    step: f64,
    f: Vec<Complex64>,
    cum: Vec<Complex64>,
}

impl Branch {
    fn build(u0: f64, u_max: f64, step: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let len = if u_max > u0 {
            ((u_max - u0) / step).floor() as usize + 2
        } else {
            0
        };
        let mut vals = Vec::with_capacity(len);
        let mut cum = Vec::with_capacity(len);
        let mut acc = ComplexSum::new();
        for i in 0..len {
            let v = f(u0 + i as f64 * step);
            if i > 0 {
                acc.add(0.5 * step * (vals[i - 1] + v));
            }
            vals.push(v);
            cum.push(acc.value());
        }
        Branch {
            u0,
            step,
            f: vals,
            cum,
        }
    }

    /// Integral from u0 to u of the piecewise-linear interpolant.
    fn at(&self, u: f64) -> Complex64 {
        let n = self.f.len();
        debug_assert!(n >= 2, "branch queried but never built");
        let x = (u - self.u0) / self.step;
        let i = (x.floor().max(0.0) as usize).min(n - 2);
        let t = u - (self.u0 + i as f64 * self.step);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        self.cum[i] + f0 * t + (f1 - f0) * (t * t / (2.0 * self.step))
    }
}

/// Antiderivative of c(p)·g(p) over [lo, hi], where c(p) = |p|/√(p² − s²)
/// outside the excluded gap (−s, s) and 0 inside it.
///
/// Nodes sit on lattices anchored at ±(s + ε) with spacing Δ; between
/// nodes the integrand is linearly interpolated, so differences of
/// [`PatchedTable::at`] at nodes are plain trapezoid sums. Within ε of each
/// divergence the integral is √(δ(δ + 2s)) times g frozen at ±s. With
/// s = 0 there is no divergence and the lattice is iΔ.
#[derive(Debug, Clone)]
pub struct PatchedTable {
    s: f64,
    eps: f64,
    plus: Branch,
    minus: Branch,
    g_plus: Complex64,
    g_minus: Complex64,
}

impl PatchedTable {
    pub fn build(lo: f64, hi: f64, s: f64, step: f64, eps: f64, g: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_step(step)?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return domain(format!("table range [{lo}, {hi}] is invalid"));
        }
        if !(s.is_finite() && s >= 0.0) {
            return domain(format!("singular momentum must be nonnegative, got {s}"));
        }
        let zero = Complex64::new(0.0, 0.0);
        if s == 0.0 {
            return Ok(PatchedTable {
                s,
                eps: 0.0,
                plus: Branch::build(0.0, hi.max(0.0), step, &g),
                minus: Branch::build(0.0, (-lo).max(0.0), step, |u| g(-u)),
                g_plus: zero,
                g_minus: zero,
            });
        }
        if !(eps.is_finite() && eps > 0.0) {
            return domain(format!("patch width must be positive, got {eps}"));
        }
        let u0 = s + eps;
        let weighted = |p: f64| g(p) * (p.abs() / radial(p, s));
        Ok(PatchedTable {
            s,
            eps,
            plus: Branch::build(u0, hi, step, weighted),
            minus: Branch::build(u0, -lo, step, |u| weighted(-u)),
            g_plus: if hi > s { g(s) } else { zero },
            g_minus: if lo < -s { g(-s) } else { zero },
        })
    }

    /// Signed integral from the gap (reference 0) to p.
    pub fn at(&self, p: f64) -> Complex64 {
        if p >= 0.0 {
            self.side(p, &self.plus, self.g_plus)
        } else {
            -self.side(-p, &self.minus, self.g_minus)
        }
    }

    fn side(&self, u: f64, branch: &Branch, g0: Complex64) -> Complex64 {
        if self.s == 0.0 {
            return if u == 0.0 { Complex64::new(0.0, 0.0) } else { branch.at(u) };
        }
        if u <= self.s {
            return Complex64::new(0.0, 0.0);
        }
        let d = u - self.s;
        if d <= self.eps {
            return g0 * patch_weight(d, self.s);
        }
        g0 * patch_weight(self.eps, self.s) + branch.at(u)
    }

    /// Integral over [a, b].
    pub fn integral(&self, a: f64, b: f64) -> Complex64 {
        self.at(b) - self.at(a)
    }

    /// Number of integrand evaluations the table holds.
    pub fn node_count(&self) -> usize {
        self.plus.f.len() + self.minus.f.len()
    }
}

/// ∫ over [p_lo, p_hi] of |p|/√(p² − M²ω²x_f²) · g(p), with the excluded
/// gap contributing nothing, ε-patches at the divergences, and trapezoids
/// of width `spacing` elsewhere.
pub fn singular_window_integral(
    p_lo: f64,
    p_hi: f64,
    xf: f64,
    c: &crate::specfun::HoConstants,
    regular: impl Fn(f64) -> Complex64,
    epsilon: f64,
    spacing: f64,
) -> Result<Complex64> {
    c.validate()?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return domain(format!("patch width must be positive, got {epsilon}"));
    }
    let s = c.mass * c.omega * xf.abs();
    let table = PatchedTable::build(p_lo, p_hi, s, spacing, epsilon, regular)?;
    Ok(table.integral(p_lo, p_hi))
}

/// C∞ step from 0 at t ≤ 0 to 1 at t ≥ 1.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::HoConstants;
    use crate::systems::SystemSpec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trapezoid_examples() {
        let s: Vec<_> = [0.0, 0.3, 1.1, 2.0].iter().map(|&x| (x, c(1.0))).collect();
        assert!((trapezoid(&s).unwrap() - 2.0).norm() < 1e-15);
        let s: Vec<_> = [0.0, 1.0, 2.0].iter().map(|&x| (x, c(x))).collect();
        assert_eq!(trapezoid(&s).unwrap(), c(2.0));
        assert!(trapezoid(&[(0.0, c(1.0))]).is_err());
        assert!(trapezoid(&[(1.0, c(1.0)), (1.0, c(1.0))]).is_err());
    }

    #[test]
    fn trapezoid_converges_quadratically() {
        let err = |n: usize| {
            let s: Vec<_> = (0..=n)
                .map(|i| {
                    let x = 2.0 * i as f64 / n as f64;
                    (x, c(x * x))
                })
                .collect();
            (trapezoid(&s).unwrap().re - 8.0 / 3.0).abs()
        };
        let slope = (err(50) / err(100)).log2();
        assert!((slope - 2.0).abs() < 0.01, "slope {slope}");
    }

    #[test]
    fn grids_are_symmetric_and_snap() {
        let g = UniformGrid::symmetric(5.0, 0.1).unwrap();
        assert_eq!(g.len, 101);
        for j in 0..g.len {
            assert_eq!(g.value(j), -g.value(g.len - 1 - j));
        }
        let g = UniformGrid::span(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len, 11);
        assert!(UniformGrid::span(1.0, 1.0, 0.1).is_err());
        assert!(UniformGrid::symmetric(1.0, 0.0).is_err());
    }

    #[test]
    fn oscillator_grid_defaults() {
        let s0 = EigenstateSpec::ho(0, HoConstants::natural()).unwrap();
        let t = 32.0 * PI;
        let g = oscillator_grids(&s0, t, &GridOverrides::default()).unwrap();
        assert_eq!(g.x_f.len, 101);
        assert_eq!(g.x_f.lo(), -5.0);
        assert_eq!(g.inner.points_per_window(1.0), 150.0);
        assert_eq!(g.inner.points_per_window(0.2), 50.0);
        assert_eq!(g.times.len(), 32);
        for &tp in &g.times {
            let u = tp / PI;
            assert!((u - u.round()).abs() > 0.01);
        }
        let s3 = EigenstateSpec::ho(3, HoConstants::natural()).unwrap();
        let g3 = oscillator_grids(&s3, t, &GridOverrides::default()).unwrap();
        assert!((g3.x_f.hi() - 5.0 * 7f64.sqrt()).abs() < 0.1);
        let free = EigenstateSpec::from_number(SystemSpec::free_line(1.0, 1.0).unwrap(), 1.0).unwrap();
        assert!(oscillator_grids(&free, t, &GridOverrides::default()).is_err());
        assert_eq!(g, oscillator_grids(&s0, t, &GridOverrides::default()).unwrap());
    }

    #[test]
    fn patch_weight_example() {
        assert!((patch_weight(0.01, 1.0) - 0.141774).abs() < 1e-6);
        assert!(patch_weight(1e-12, 1.0) < 2e-6);
    }

    #[test]
    fn table_is_plain_trapezoid_without_divergence() {
        let g = |p: f64| Complex64::new(p.cos(), p.sin() * 0.5);
        let t = PatchedTable::build(-1.0, 1.0, 0.0, 0.01, 0.01, g).unwrap();
        let samples: Vec<_> = (-100..=100).map(|i| (i as f64 * 0.01, g(i as f64 * 0.01))).collect();
        assert!((t.integral(-1.0, 1.0) - trapezoid(&samples).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn table_handles_gap_and_patches() {
        let s = 0.5;
        let eps = 1e-3;
        let t = PatchedTable::build(-2.0, 2.0, s, 1e-3, eps, |_| c(1.0)).unwrap();
        // Inside the gap nothing accumulates.
        assert_eq!(t.integral(-0.4, 0.4), c(0.0));
        // With g ≡ 1 the exact antiderivative is √(p² − s²).
        let exact = 2.0 * (4.0f64 - s * s).sqrt();
        let rel = (t.integral(-2.0, 2.0).re - exact).abs() / exact;
        assert!(rel < 2e-3, "rel {rel}");
        // Continuity across the divergence.
        let a = t.at(s + eps * (1.0 - 1e-12));
        let b = t.at(s + eps * (1.0 + 1e-12));
        assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn singular_window_rejects_bad_patch() {
        let c0 = HoConstants::natural();
        assert!(singular_window_integral(0.5, 1.5, 1.0, &c0, |_| c(1.0), 0.0, 1e-3).is_err());
        // Window entirely inside the gap.
        let v = singular_window_integral(-0.5, 0.5, 1.0, &c0, |_| c(1.0), 1e-3, 1e-3).unwrap();
        assert_eq!(v, c(0.0));
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
