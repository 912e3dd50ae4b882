//! Integrands in characteristic momentum, cumulative phasor curves, window
//! averages ΔF/(2w) and the shifted-segment decomposition.
//!
//! For the four stationary systems the integrand is a sum of terms
//! A·exp(iγ(p − c)²) with γ = T/(2ħI), so every integral over p is taken in
//! closed form. The oscillator integrand is tabulated on the patched
//! lattice of [`PatchedTable`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{GridBundle, PatchedTable};
use crate::specfun::{gaussian_phase_integral, hermite_function, HoConstants};
use crate::systems::{radial, sgn, EigenstateSpec, HoTime, SystemKind};

/// Σ A_j exp(iγ(p − c_j)²) restricted to p ∈ (lo, hi).
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadraticTerms {
    gamma: f64,
    terms: [(Complex64, f64); 2],
    count: usize,
    lo: f64,
    hi: f64,
}

impl QuadraticTerms {
    /// Terms for a stationary state at final point `xf`; `images` bounds the
    /// winding or image sum (None keeps all of them).
    pub fn new(state: &EigenstateSpec, xf: f64, t: f64, images: Option<u32>) -> Result<Self> {
        let sys = state.system();
        sys.check_point(xf)?;
        if !(t.is_finite() && t > 0.0) {
            return domain(format!("travel time must be positive, got {t}"));
        }
        let (h, m) = (sys.hbar, sys.inertia());
        let gamma = t / (2.0 * h * m);
        // √(T/2πiħI)
        let pre = Complex64::from_polar((t / (TAU * h * m)).sqrt(), -FRAC_PI_4);
        let k = state.wavenumber().ok_or_else(|| Error::Domain("the oscillator has no quadratic integrand".into()))?;
        let hk = h * k;
        let plane = Complex64::from_polar(1.0, k * xf);
        let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
        let zero = Complex64::new(0.0, 0.0);
        let (terms, count) = match sys.kind {
            SystemKind::FreeLine | SystemKind::Circle { .. } => ([(plane * pre, hk), (zero, 0.0)], 1),
            SystemKind::HardWall | SystemKind::SquareWell { .. } => (
                [(plane * pre * half_i, hk), (-plane.conj() * pre * half_i, -hk)],
                2,
            ),
            SystemKind::HarmonicOscillator { .. } => unreachable!(),
        };
        let (lo, hi) = match (sys.kind, images) {
            (SystemKind::Circle { .. }, Some(n)) => {
                let n = f64::from(n);
                (m * (xf - TAU * (n + 1.0)) / t, m * (xf + TAU * n) / t)
            }
            (SystemKind::SquareWell { width }, Some(n)) => {
                let reach = (2.0 * f64::from(n) + 1.0) * width;
                (m * (xf - reach) / t, m * (xf + reach) / t)
            }
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
        Ok(QuadraticTerms {
            gamma,
            terms,
            count,
            lo,
            hi,
        })
    }

    pub fn value(&self, p: f64) -> Complex64 {
        if p <= self.lo || p >= self.hi {
            return Complex64::new(0.0, 0.0);
        }
        self.terms[..self.count]
            .iter()
            .map(|&(a, c)| a * Complex64::from_polar(1.0, self.gamma * (p - c) * (p - c)))
            .sum()
    }

    /// ∫_a^b (either limit may be infinite).
    pub fn integral(&self, a: f64, b: f64) -> Complex64 {
        let (a, b) = (a.max(self.lo), b.min(self.hi));
        if !(b > a) {
            return Complex64::new(0.0, 0.0);
        }
        self.terms[..self.count]
            .iter()
            .map(|&(amp, c)| amp * gaussian_phase_integral(a - c, b - c, self.gamma))
            .sum()
    }
}

/// The oscillator integrand at fixed (x_f, T), split as
/// |p|/√(p² − s²) · g(p) with s = Mω|x_f|.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HoIntegrand {
    n: u32,
    c: HoConstants,
    xf: f64,
    s: f64,
    mw: f64,
    cos: f64,
    sin: f64,
    xi_scale: f64,
    amp: f64,
    pre: Complex64,
}

impl HoIntegrand {
    pub fn new(state: &EigenstateSpec, xf: f64, t: f64) -> Result<Self> {
        let c = state
            .system()
            .ho_constants()
            .ok_or_else(|| Error::Domain("not an oscillator state".into()))?;
        if !xf.is_finite() {
            return domain(format!("final position {xf} is not finite"));
        }
        let n = state.level().unwrap();
        let tm = HoTime::new(&c, t)?;
        let mw = c.mass * c.omega;
        let alpha = mw / c.hbar;
        let phase = (f64::from(n) + 0.5) * c.omega * t - FRAC_PI_2 * tm.maslov as f64 - FRAC_PI_4;
        // Reduce before forming the phasor so large ωT keeps full precision.
        let phase = phase.rem_euclid(TAU);
        Ok(HoIntegrand {
            n,
            c,
            xf,
            s: mw * xf.abs(),
            mw,
            cos: tm.cos,
            sin: tm.sin,
            xi_scale: alpha.sqrt(),
            amp: alpha.powf(0.25),
            pre: Complex64::from_polar((tm.sin.abs() / (TAU * c.hbar * mw)).sqrt(), phase),
        })
    }

    /// Everything but the divergent factor; valid for |p| ≥ s.
    #[inline]
    pub fn regular(&self, p: f64) -> Complex64 {
        let r = radial(p, self.s);
        let sg = sgn(p);
        let x0 = self.xf * self.cos - sg * self.sin * r / self.mw;
        let action = self.sin / (2.0 * self.mw)
            * (self.cos * (p * p - 2.0 * self.s * self.s) + 2.0 * self.xf * self.mw * sg * self.sin * r);
        let psi = self.amp * hermite_function(self.n, self.xi_scale * x0);
        self.pre * Complex64::from_polar(psi, action / self.c.hbar)
    }

    pub fn value(&self, p: f64) -> Result<Complex64> {
        let a = p.abs();
        if a < self.s {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if self.s > 0.0 && a == self.s {
            return Err(Error::DivergentSample(p));
        }
        let jac = if self.s == 0.0 { 1.0 } else { a / radial(p, self.s) };
        Ok(self.regular(p) * jac)
    }

    /// Patched antiderivative over [lo, hi] on lattice spacing `step`.
    pub fn table(&self, lo: f64, hi: f64, step: f64, eps: f64) -> Result<PatchedTable> {
        PatchedTable::build(lo, hi, self.s, step, eps, |p| self.regular(p))
    }
}

/// Full p_c-space integrand e^{iE_jT/ħ} ψ_j(x̃0) K̆ including the Jacobian.
pub fn integrand(state: &EigenstateSpec, p_c: f64, xf: f64, t: f64) -> Result<Complex64> {
    if state.system().is_oscillator() {
        HoIntegrand::new(state, xf, t)?.value(p_c)
    } else {
        Ok(QuadraticTerms::new(state, xf, t, None)?.value(p_c))
    }
}

/// Integrals of the integrand over arbitrary sub-intervals of a fixed
/// range, for one (state, x_f, T).
#[derive(Debug, Clone)]
pub struct WindowEvaluator {
    inner: Evaluator,
    halfwidth: f64,
}

#[derive(Debug, Clone)]
enum Evaluator {
    Closed(QuadraticTerms),
    Table(PatchedTable),
}

impl WindowEvaluator {
    /// Prepares integrals over subsets of [lo, hi]. The oscillator
    /// tabulates its integrand there with the inner spacing of `grids`;
    /// the other systems need no preparation and accept any limits.
    pub fn new(state: &EigenstateSpec, xf: f64, t: f64, lo: f64, hi: f64, grids: &GridBundle) -> Result<Self> {
        let halfwidth = state.system().window_halfwidth(t);
        let inner = if state.system().is_oscillator() {
            let ho = HoIntegrand::new(state, xf, t)?;
            let step = grids.inner.spacing(halfwidth, xf);
            Evaluator::Table(ho.table(lo, hi, step, grids.epsilon_for(step))?)
        } else {
            Evaluator::Closed(QuadraticTerms::new(state, xf, t, grids.images)?)
        };
        Ok(WindowEvaluator { inner, halfwidth })
    }

    /// Evaluator covering every window centred on `p_c`.
    pub fn for_grid(state: &EigenstateSpec, xf: f64, t: f64, p_c: &[f64], grids: &GridBundle) -> Result<Self> {
        let w = state.system().window_halfwidth(t);
        let lo = p_c.first().copied().unwrap_or(0.0) - w;
        let hi = p_c.last().copied().unwrap_or(0.0) + w;
        Self::new(state, xf, t, lo, hi, grids)
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn integral(&self, a: f64, b: f64) -> Complex64 {
        match &self.inner {
            Evaluator::Closed(q) => q.integral(a, b),
            Evaluator::Table(tb) => tb.integral(a, b),
        }
    }

    /// ΔF(p_c)/(2w).
    pub fn window_average(&self, p_c: f64) -> Complex64 {
        let w = self.halfwidth;
        self.integral(p_c - w, p_c + w) / (2.0 * w)
    }
}

/// ΔF_j(p_c, x_f, T) / (2√(ħI/T)).
pub fn window_average(state: &EigenstateSpec, p_c: f64, xf: f64, t: f64, grids: &GridBundle) -> Result<Complex64> {
    let w = state.system().window_halfwidth(t);
    Ok(WindowEvaluator::new(state, xf, t, p_c - w, p_c + w, grids)?.window_average(p_c))
}

/// Cumulative integral of the integrand sampled along a p_c grid.
#[derive(Debug, Clone, Serialize)]
pub struct PhasorCurve {
    pub p_c: Vec<f64>,
    pub cumulative: Vec<Complex64>,
    pub state: EigenstateSpec,
    pub x_f: f64,
    pub t: f64,
}

impl PhasorCurve {
    pub fn final_value(&self) -> Complex64 {
        *self.cumulative.last().unwrap()
    }

    /// Cumulative value at an arbitrary p inside the grid, by linear
    /// interpolation between samples.
    pub fn value_at(&self, p: f64) -> Option<Complex64> {
        let i = self.p_c.partition_point(|&q| q <= p);
        if i == 0 || i > self.p_c.len() {
            return None;
        }
        if i == self.p_c.len() {
            return (p == self.p_c[i - 1]).then(|| self.cumulative[i - 1]);
        }
        let (p0, p1) = (self.p_c[i - 1], self.p_c[i]);
        let t = (p - p0) / (p1 - p0);
        Some(self.cumulative[i - 1] * (1.0 - t) + self.cumulative[i] * t)
    }
}

fn check_ascending(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return domain("a phasor curve needs at least 2 grid points");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|p| !p.is_finite()) {
        return domain("phasor grid must be finite and strictly increasing");
    }
    Ok(())
}

/// F_j(p_c) = ∫_{−∞}^{p_c} of the integrand, sampled on `grid`.
///
/// Stationary systems include the exact tail below the first grid point
/// and exact integrals over every cell. The oscillator starts from zero at
/// the first grid point and uses the patched rule on a lattice as fine as
/// the smallest grid gap.
pub fn phasor_curve(state: &EigenstateSpec, xf: f64, t: f64, grid: &[f64]) -> Result<PhasorCurve> {
    check_ascending(grid)?;
    let cumulative = if state.system().is_oscillator() {
        let ho = HoIntegrand::new(state, xf, t)?;
        let step = grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let table = ho.table(grid[0], grid[grid.len() - 1], step, step)?;
        let base = table.at(grid[0]);
        grid.iter().map(|&p| table.at(p) - base).collect()
    } else {
        let q = QuadraticTerms::new(state, xf, t, None)?;
        let mut acc = crate::quadrature::ComplexSum::new();
        acc.add(q.integral(f64::NEG_INFINITY, grid[0]));
        let mut out = vec![acc.value()];
        for w in grid.windows(2) {
            acc.add(q.integral(w[0], w[1]));
            out.push(acc.value());
        }
        out
    };
    Ok(PhasorCurve {
        p_c: grid.to_vec(),
        cumulative,
        state: *state,
        x_f: xf,
        t,
    })
}

/// One window of the shifted decomposition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Segment {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
    pub delta: Complex64,
}

/// Windows centred on p_ν = 2νw + δp, clipped to [lo, hi], each with its
/// integral ΔF. The first window also carries the tail below `lo` when it
/// is known in closed form.
pub fn segments(state: &EigenstateSpec, xf: f64, t: f64, delta_p: f64, lo: f64, hi: f64) -> Result<Vec<Segment>> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return domain(format!("segment range [{lo}, {hi}] is empty"));
    }
    if !delta_p.is_finite() {
        return domain("segment offset must be finite");
    }
    let w = state.system().window_halfwidth(t);
    let grids = default_grids(state, t)?;
    let eval = WindowEvaluator::new(state, xf, t, lo, hi, &grids)?;
    let first = ((lo - delta_p - w) / (2.0 * w)).floor() as i64;
    let last = ((hi - delta_p + w) / (2.0 * w)).ceil() as i64;
    let mut out = Vec::with_capacity((last - first + 1).max(0) as usize);
    for nu in first..=last {
        let center = 2.0 * nu as f64 * w + delta_p;
        let (a, b) = ((center - w).max(lo), (center + w).min(hi));
        if b <= a {
            continue;
        }
        out.push(Segment {
            center,
            lo: a,
            hi: b,
            delta: eval.integral(a, b),
        });
    }
    if let (Some(first), false) = (out.first_mut(), state.system().is_oscillator()) {
        first.delta += eval.integral(f64::NEG_INFINITY, lo);
    }
    Ok(out)
}

/// Σ_ν ΔF over the windows of [`segments`]; independent of δp.
pub fn segment_sum_check(state: &EigenstateSpec, xf: f64, t: f64, delta_p: f64, lo: f64, hi: f64) -> Result<Complex64> {
    let mut acc = crate::quadrature::ComplexSum::new();
    for s in segments(state, xf, t, delta_p, lo, hi)? {
        acc.add(s.delta);
    }
    Ok(acc.value())
}

fn default_grids(state: &EigenstateSpec, t: f64) -> Result<GridBundle> {
    GridBundle::for_state(state, t, &Default::default())
}

/// Composite grid used for the free-particle phasor figure: spacing
/// `fine` within `core` of p0 and `coarse` out to `reach`.
pub fn composite_grid(p0: f64, core: f64, fine: f64, reach: f64, coarse: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let n_out = ((reach - core) / coarse).round() as i64;
    for i in (1..=n_out).rev() {
        g.push(p0 - core - i as f64 * coarse);
    }
    let n_in = (core / fine).round() as i64;
    for i in -n_in..=n_in {
        g.push(p0 + i as f64 * fine);
    }
    for i in 1..=n_out {
        g.push(p0 + core + i as f64 * coarse);
    }
    g
}
