//! Momentum-space path decompositions of quantum eigenstates.
//!
//! A Feynman propagator expressed in final momentum p_c is integrated over
//! short windows, weighted by the eigenfunction at the endpoint and summed
//! over endpoints, giving a distribution 𝒫_j(p_c, T) over classical paths.
//! Exactly solvable systems are handled in closed form; the harmonic
//! oscillator goes through a patched quadrature around its turning-point
//! singularity.

pub mod compare;
pub mod config;
pub mod distribution;
pub mod error;
pub mod figures;
pub mod output;
pub mod phasor;
pub mod quadrature;
pub mod reconstruct;
pub mod specfun;
pub mod systems;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use specfun::HoConstants;
pub use systems::{EigenstateSpec, Quantum, SystemKind, SystemSpec};
