//! The five one-dimensional systems: constants, eigenstates, closed-form
//! propagators, the maps from characteristic momentum back to an initial
//! point, and the classical mechanics of the oscillator.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{ho_eigenfunction, HoConstants};

/// Image or winding terms kept on each side when a caller does not size the
/// sum from an analysis window.
pub const DEFAULT_IMAGE_TERMS: u32 = 8;

/// Which system, with the constants only that system needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemKind {
    FreeLine,
    Circle { radius: f64 },
    HardWall,
    SquareWell { width: f64 },
    HarmonicOscillator { omega: f64 },
}

/// Spatial domain of the final (and initial) coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Domain {
    /// The whole real line.
    Line,
    /// Angle in [0, 2π], the endpoints identified.
    Angle,
    /// (0, ∞), wall at the origin.
    HalfLine,
    /// (0, a).
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub hbar: f64,
    pub mass: f64,
    #[serde(flatten)]
    pub kind: SystemKind,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {v}"))
    }
}

impl SystemSpec {
    pub fn new(hbar: f64, mass: f64, kind: SystemKind) -> Result<Self> {
        let s = SystemSpec { hbar, mass, kind };
        s.validate()?;
        Ok(s)
    }

    pub fn free_line(hbar: f64, mass: f64) -> Result<Self> {
        Self::new(hbar, mass, SystemKind::FreeLine)
    }

    pub fn circle(hbar: f64, mass: f64, radius: f64) -> Result<Self> {
        Self::new(hbar, mass, SystemKind::Circle { radius })
    }

    pub fn hard_wall(hbar: f64, mass: f64) -> Result<Self> {
        Self::new(hbar, mass, SystemKind::HardWall)
    }

    pub fn square_well(hbar: f64, mass: f64, width: f64) -> Result<Self> {
        Self::new(hbar, mass, SystemKind::SquareWell { width })
    }

    pub fn harmonic_oscillator(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        Self::new(hbar, mass, SystemKind::HarmonicOscillator { omega })
    }

    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("mass", self.mass)?;
        match self.kind {
            SystemKind::Circle { radius } => positive("radius", radius),
            SystemKind::SquareWell { width } => positive("width", width),
            SystemKind::HarmonicOscillator { omega } => positive("omega", omega),
            SystemKind::FreeLine | SystemKind::HardWall => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SystemKind::FreeLine => "free",
            SystemKind::Circle { .. } => "circle",
            SystemKind::HardWall => "hardwall",
            SystemKind::SquareWell { .. } => "squarewell",
            SystemKind::HarmonicOscillator { .. } => "ho",
        }
    }

    pub fn domain(&self) -> Domain {
        match self.kind {
            SystemKind::FreeLine | SystemKind::HarmonicOscillator { .. } => Domain::Line,
            SystemKind::Circle { .. } => Domain::Angle,
            SystemKind::HardWall => Domain::HalfLine,
            SystemKind::SquareWell { .. } => Domain::Interval,
        }
    }

    /// Mass for linear motion, moment of inertia MR² on the circle.
    pub fn inertia(&self) -> f64 {
        match self.kind {
            SystemKind::Circle { radius } => self.mass * radius * radius,
            _ => self.mass,
        }
    }

    pub fn ho_constants(&self) -> Option<HoConstants> {
        match self.kind {
            SystemKind::HarmonicOscillator { omega } => Some(HoConstants {
                hbar: self.hbar,
                mass: self.mass,
                omega,
            }),
            _ => None,
        }
    }

    pub fn is_oscillator(&self) -> bool {
        matches!(self.kind, SystemKind::HarmonicOscillator { .. })
    }

    /// Half-width √(ħ·inertia/T) of the averaging window at travel time T.
    pub fn window_halfwidth(&self, t: f64) -> f64 {
        (self.hbar * self.inertia() / t).sqrt()
    }

    pub fn check_point(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return domain(format!("coordinate {x} is not finite"));
        }
        let ok = match self.kind {
            SystemKind::FreeLine | SystemKind::HarmonicOscillator { .. } => true,
            SystemKind::Circle { .. } => (0.0..=TAU).contains(&x),
            SystemKind::HardWall => x >= 0.0,
            SystemKind::SquareWell { width } => (0.0..=width).contains(&x),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("coordinate {x} lies outside the {} domain", self.name()))
        }
    }
}

/// Quantum number in the form each system uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantum {
    /// Wavenumber k (free line, hard wall).
    Wavenumber(f64),
    /// Angular quantum number ℓ (circle).
    Angular(i64),
    /// Level index n (square well from 1, oscillator from 0).
    Level(u32),
}

/// An eigenstate together with its energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenstateSpec {
    system: SystemSpec,
    quantum: Quantum,
    energy: f64,
}

impl EigenstateSpec {
    pub fn new(system: SystemSpec, quantum: Quantum) -> Result<Self> {
        system.validate()?;
        let ok = match (system.kind, quantum) {
            (SystemKind::FreeLine, Quantum::Wavenumber(k)) => k.is_finite(),
            (SystemKind::HardWall, Quantum::Wavenumber(k)) => k.is_finite() && k > 0.0,
            (SystemKind::Circle { .. }, Quantum::Angular(_)) => true,
            (SystemKind::SquareWell { .. }, Quantum::Level(n)) => n >= 1,
            (SystemKind::HarmonicOscillator { .. }, Quantum::Level(n)) => {
                n <= crate::specfun::MAX_DEGREE
            }
            _ => false,
        };
        if !ok {
            return domain(format!("{quantum:?} is not a valid quantum number for the {} system", system.name()));
        }
        let mut s = EigenstateSpec {
            system,
            quantum,
            energy: 0.0,
        };
        s.energy = s.compute_energy();
        Ok(s)
    }

    /// Builds a state from a bare number, interpreting it the way `system`
    /// labels its states.
    pub fn from_number(system: SystemSpec, q: f64) -> Result<Self> {
        let quantum = match system.kind {
            SystemKind::FreeLine | SystemKind::HardWall => Quantum::Wavenumber(q),
            SystemKind::Circle { .. } => {
                if q.fract() != 0.0 || !q.is_finite() {
                    return domain(format!("angular quantum number must be an integer, got {q}"));
                }
                Quantum::Angular(q as i64)
            }
            SystemKind::SquareWell { .. } | SystemKind::HarmonicOscillator { .. } => {
                if q.fract() != 0.0 || !(0.0..=f64::from(u32::MAX)).contains(&q) {
                    return domain(format!("level index must be a nonnegative integer, got {q}"));
                }
                Quantum::Level(q as u32)
            }
        };
        Self::new(system, quantum)
    }

    /// Oscillator state n with the given constants.
    pub fn ho(n: u32, c: HoConstants) -> Result<Self> {
        Self::new(
            SystemSpec::harmonic_oscillator(c.hbar, c.mass, c.omega)?,
            Quantum::Level(n),
        )
    }

    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn quantum(&self) -> Quantum {
        self.quantum
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// The quantum number as a plain number, for manifests and CSV headers.
    pub fn quantum_value(&self) -> f64 {
        match self.quantum {
            Quantum::Wavenumber(k) => k,
            Quantum::Angular(l) => l as f64,
            Quantum::Level(n) => f64::from(n),
        }
    }

    pub fn level(&self) -> Option<u32> {
        match self.quantum {
            Quantum::Level(n) => Some(n),
            _ => None,
        }
    }

    /// Spatial wavenumber (k, ℓ or k_n); None for the oscillator.
    pub fn wavenumber(&self) -> Option<f64> {
        match (self.system.kind, self.quantum) {
            (_, Quantum::Wavenumber(k)) => Some(k),
            (_, Quantum::Angular(l)) => Some(l as f64),
            (SystemKind::SquareWell { width }, Quantum::Level(n)) => Some(f64::from(n) * PI / width),
            _ => None,
        }
    }

    /// Momentum at which the dominant paths sit: ħk, ħℓ, ħk_n, or √(2ME_n).
    pub fn stationary_momentum(&self) -> f64 {
        match self.wavenumber() {
            Some(k) => self.system.hbar * k,
            None => (2.0 * self.system.mass * self.energy).sqrt(),
        }
    }

    fn compute_energy(&self) -> f64 {
        let s = &self.system;
        match (s.kind, self.quantum) {
            (SystemKind::HarmonicOscillator { omega }, Quantum::Level(n)) => (f64::from(n) + 0.5) * s.hbar * omega,
            _ => {
                let k = self.wavenumber().unwrap_or(0.0);
                s.hbar * s.hbar * k * k / (2.0 * s.inertia())
            }
        }
    }

    /// ψ_j(x): plane waves are left unnormalized, the oscillator state is
    /// normalized.
    pub fn eigenfunction(&self, x: f64) -> Result<Complex64> {
        self.system.check_point(x)?;
        let v = match (self.system.kind, self.quantum) {
            (SystemKind::HarmonicOscillator { .. }, Quantum::Level(n)) => {
                Complex64::new(ho_eigenfunction(n, x, &self.system.ho_constants().unwrap())?, 0.0)
            }
            (SystemKind::FreeLine | SystemKind::Circle { .. }, _) => {
                Complex64::from_polar(1.0, self.wavenumber().unwrap() * x)
            }
            _ => Complex64::new((self.wavenumber().unwrap() * x).sin(), 0.0),
        };
        Ok(v)
    }
}

/// Convenience wrapper for [`EigenstateSpec::energy`].
pub fn eigen_energy(state: &EigenstateSpec) -> f64 {
    state.energy()
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        domain(format!("travel time must be positive and finite, got {t}"))
    }
}

/// √(m/2πiħT), the free-motion prefactor.
pub(crate) fn free_prefactor(hbar: f64, inertia: f64, t: f64) -> Complex64 {
    Complex64::from_polar((inertia / (TAU * hbar * t)).sqrt(), -FRAC_PI_4)
}

fn free_phase(hbar: f64, inertia: f64, t: f64, d: f64) -> Complex64 {
    Complex64::from_polar(1.0, inertia * d * d / (2.0 * hbar * t))
}

/// Propagator K(x0, x_f, T) with the default image/winding truncation.
pub fn propagator(system: &SystemSpec, x0: f64, xf: f64, t: f64) -> Result<Complex64> {
    propagator_with_images(system, x0, xf, t, DEFAULT_IMAGE_TERMS)
}

/// Propagator with an explicit number of winding (circle) or image
/// (square well) terms on each side; ignored by the other systems.
pub fn propagator_with_images(system: &SystemSpec, x0: f64, xf: f64, t: f64, images: u32) -> Result<Complex64> {
    system.validate()?;
    check_time(t)?;
    system.check_point(x0)?;
    system.check_point(xf)?;
    let (h, m) = (system.hbar, system.inertia());
    let pre = free_prefactor(h, m, t);
    let n_w = i64::from(images);
    let k = match system.kind {
        SystemKind::FreeLine => pre * free_phase(h, m, t, xf - x0),
        SystemKind::Circle { .. } => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in -n_w..=n_w {
                sum += free_phase(h, m, t, xf - x0 + TAU * n as f64);
            }
            pre * sum
        }
        SystemKind::HardWall => pre * (free_phase(h, m, t, xf - x0) - free_phase(h, m, t, xf + x0)),
        SystemKind::SquareWell { width } => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in -n_w..=n_w {
                let shift = 2.0 * width * n as f64;
                sum += free_phase(h, m, t, xf - x0 + shift) - free_phase(h, m, t, xf + x0 + shift);
            }
            pre * sum
        }
        SystemKind::HarmonicOscillator { omega } => {
            let c = HoConstants { hbar: h, mass: m, omega };
            let tm = HoTime::new(&c, t)?;
            let amp = (m * omega / (TAU * h * tm.sin.abs())).sqrt();
            let phase = m * omega * ((x0 * x0 + xf * xf) * tm.cos - 2.0 * x0 * xf) / (2.0 * h * tm.sin)
                - FRAC_PI_2 * tm.maslov as f64;
            Complex64::from_polar(amp, phase - FRAC_PI_4)
        }
    };
    Ok(k)
}

/// Maslov index ⌊ωT/π⌋.
pub fn maslov_index(omega_t: f64) -> Result<u64> {
    if !(omega_t.is_finite() && omega_t > 0.0) {
        return domain(format!("ωT must be positive and finite, got {omega_t}"));
    }
    let u = omega_t / PI;
    if (u - u.round()).abs() <= 1e-12 * u.max(1.0) {
        return Err(Error::Singularity(format!(
            "ωT = {omega_t} is an integer multiple of π; the oscillator propagator diverges there"
        )));
    }
    Ok(u.floor() as u64)
}

/// cos ωT, sin ωT and the Maslov index for one travel time.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HoTime {
    pub cos: f64,
    pub sin: f64,
    pub maslov: u64,
}

impl HoTime {
    pub fn new(c: &HoConstants, t: f64) -> Result<Self> {
        check_time(t)?;
        let wt = c.omega * t;
        let maslov = maslov_index(wt)?;
        let (sin, cos) = wt.sin_cos();
        Ok(HoTime { cos, sin, maslov })
    }
}

/// sgn with sgn(0) = 0.
pub(crate) fn sgn(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// √(p² − s²) computed without cancellation; requires |p| ≥ s ≥ 0.
pub(crate) fn radial(p: f64, s: f64) -> f64 {
    let a = p.abs();
    ((a - s) * (a + s)).max(0.0).sqrt()
}

/// Extended initial coordinate for a characteristic momentum.
///
/// Line-like systems return x̃0 = x_f − p_c T/M; the circle returns the
/// extended angular displacement φ̃ = L_c T/I; the oscillator returns the
/// initial point of the branch selected by sgn(p_c), or `None` when
/// |p_c| < Mω|x_f| and no trajectory exists.
pub fn characteristic_x0(system: &SystemSpec, p_c: f64, xf: f64, t: f64) -> Result<Option<f64>> {
    system.validate()?;
    check_time(t)?;
    match system.kind {
        SystemKind::Circle { .. } => Ok(Some(p_c * t / system.inertia())),
        SystemKind::HarmonicOscillator { .. } => {
            let c = system.ho_constants().unwrap();
            ho_characteristic_x0(&c, p_c, xf, t)
        }
        _ => Ok(Some(xf - p_c * t / system.mass)),
    }
}

pub fn ho_characteristic_x0(c: &HoConstants, p_c: f64, xf: f64, t: f64) -> Result<Option<f64>> {
    let tm = HoTime::new(c, t)?;
    let mw = c.mass * c.omega;
    let s = mw * xf.abs();
    if p_c.abs() < s {
        return Ok(None);
    }
    Ok(Some(xf * tm.cos - sgn(p_c) * tm.sin * radial(p_c, s) / mw))
}

/// Largest momentum magnitude along the classical path from x0 to x_f.
pub fn ho_max_momentum(c: &HoConstants, x0: f64, xf: f64, t: f64) -> Result<f64> {
    c.validate()?;
    let tm = HoTime::new(c, t)?;
    let r2 = (x0 * x0 + xf * xf - 2.0 * x0 * xf * tm.cos).max(0.0);
    Ok(c.mass * c.omega * r2.sqrt() / tm.sin.abs())
}

/// Position at time `tau` along the classical path from x0 (at 0) to x_f
/// (at `t`).
pub fn ho_trajectory(c: &HoConstants, x0: f64, xf: f64, t: f64, tau: f64) -> Result<f64> {
    c.validate()?;
    let tm = HoTime::new(c, t)?;
    if !(0.0..=t).contains(&tau) {
        return domain(format!("time {tau} lies outside [0, {t}]"));
    }
    let w = c.omega;
    Ok((xf * (w * tau).sin() + x0 * (w * (t - tau)).sin()) / tm.sin)
}

/// Classical action of the path labelled by p_c ending at x_f, or `None`
/// in the excluded region |p_c| < Mω|x_f|.
pub fn ho_action(c: &HoConstants, p_c: f64, xf: f64, t: f64) -> Result<Option<f64>> {
    c.validate()?;
    let tm = HoTime::new(c, t)?;
    let mw = c.mass * c.omega;
    let s = mw * xf.abs();
    if p_c.abs() < s {
        return Ok(None);
    }
    Ok(Some(ho_action_raw(mw, tm.cos, tm.sin, p_c, xf, s)))
}

pub(crate) fn ho_action_raw(mw: f64, cos: f64, sin: f64, p: f64, xf: f64, s: f64) -> f64 {
    sin / (2.0 * mw) * (cos * (p * p - 2.0 * s * s) + 2.0 * xf * mw * sgn(p) * sin * radial(p, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural_ho() -> SystemSpec {
        SystemSpec::harmonic_oscillator(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn energies() {
        let ho = EigenstateSpec::from_number(natural_ho(), 2.0).unwrap();
        assert_eq!(ho.energy(), 2.5);
        let circ = EigenstateSpec::from_number(SystemSpec::circle(1.0, 1.0, 1.0).unwrap(), 0.0).unwrap();
        assert_eq!(circ.energy(), 0.0);
        let well = EigenstateSpec::from_number(SystemSpec::square_well(1.0, 1.0, PI).unwrap(), 1.0).unwrap();
        assert!((well.energy() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_states_rejected() {
        let wall = SystemSpec::hard_wall(1.0, 1.0).unwrap();
        assert!(EigenstateSpec::from_number(wall, -1.0).is_err());
        let well = SystemSpec::square_well(1.0, 1.0, 1.0).unwrap();
        assert!(EigenstateSpec::from_number(well, 0.0).is_err());
        assert!(EigenstateSpec::from_number(well, 1.5).is_err());
        assert!(SystemSpec::circle(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn eigenfunction_examples() {
        let free = EigenstateSpec::from_number(SystemSpec::free_line(1.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(free.eigenfunction(0.0).unwrap(), Complex64::new(1.0, 0.0));
        let wall = EigenstateSpec::from_number(SystemSpec::hard_wall(1.0, 1.0).unwrap(), 2.3).unwrap();
        assert_eq!(wall.eigenfunction(0.0).unwrap().norm(), 0.0);
        assert!(wall.eigenfunction(-0.1).is_err());
        let ho = EigenstateSpec::from_number(natural_ho(), 1.0).unwrap();
        assert_eq!(ho.eigenfunction(0.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn propagator_examples() {
        let free = SystemSpec::free_line(1.0, 1.0).unwrap();
        let k = propagator(&free, 0.4, 0.4, 3.0).unwrap();
        assert!((k - free_prefactor(1.0, 1.0, 3.0)).norm() < 1e-15);

        let wall = SystemSpec::hard_wall(1.0, 1.0).unwrap();
        let (x, t) = (0.8, 2.0);
        let k = propagator(&wall, x, x, t).unwrap();
        let exact = free_prefactor(1.0, 1.0, t) * (1.0 - Complex64::from_polar(1.0, 2.0 * x * x / t));
        assert!((k - exact).norm() < 1e-14);
        assert_eq!(propagator(&wall, 0.0, 1.3, 0.7).unwrap().norm(), 0.0);
    }

    #[test]
    fn maslov_examples() {
        assert_eq!(maslov_index(FRAC_PI_2).unwrap(), 0);
        assert_eq!(maslov_index(1.5 * PI).unwrap(), 1);
        assert_eq!(maslov_index(32.5 * PI).unwrap(), 32);
        assert!(matches!(maslov_index(3.0 * PI), Err(Error::Singularity(_))));
        assert!(matches!(
            propagator(&natural_ho(), 0.0, 1.0, PI),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn characteristic_examples() {
        let free = SystemSpec::free_line(1.0, 1.0).unwrap();
        assert_eq!(characteristic_x0(&free, 1.0, 0.0, 1e4).unwrap(), Some(-1e4));
        let c = HoConstants::natural();
        let t = 0.9;
        for &p in &[-2.0, 0.0, 1.5] {
            let x0 = ho_characteristic_x0(&c, p, 0.0, t).unwrap().unwrap();
            assert!((x0 + sgn(p) * t.sin() * p.abs()).abs() < 1e-15);
        }
        assert_eq!(ho_characteristic_x0(&c, 0.3, 0.5, t).unwrap(), None);
    }

    #[test]
    fn max_momentum_examples() {
        let c = HoConstants::natural();
        let a = 0.7;
        let p = ho_max_momentum(&c, a, a, FRAC_PI_2).unwrap();
        assert!((p - 2f64.sqrt() * a).abs() < 1e-15);
        assert_eq!(ho_max_momentum(&c, 0.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn trajectory_endpoints() {
        let c = HoConstants::new(1.0, 2.0, 1.7).unwrap();
        let (x0, xf, t) = (0.3, -1.1, 2.4);
        assert!((ho_trajectory(&c, x0, xf, t, 0.0).unwrap() - x0).abs() < 1e-14);
        assert!((ho_trajectory(&c, x0, xf, t, t).unwrap() - xf).abs() < 1e-14);
        assert!(ho_trajectory(&c, x0, xf, t, t * 1.01).is_err());
    }

    #[test]
    fn action_examples() {
        let c = HoConstants::natural();
        let t = 0.8f64;
        let s = ho_action(&c, 1.3, 0.0, t).unwrap().unwrap();
        assert!((s - t.sin() * t.cos() * 1.69 / 2.0).abs() < 1e-15);
        let s = ho_action(&c, 2.0, 0.5, FRAC_PI_2).unwrap().unwrap();
        assert!((s - 0.5 * 3.75f64.sqrt()).abs() < 1e-12);
        assert_eq!(ho_action(&c, 0.1, 0.5, 1.0).unwrap(), None);
    }

    #[test]
    fn square_well_propagator_vanishes_at_left_wall() {
        let well = SystemSpec::square_well(1.0, 1.0, 2.0).unwrap();
        assert_eq!(propagator(&well, 0.0, 0.7, 0.3).unwrap().norm(), 0.0);
    }
}
