use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failure modes shared by the library, the CLI and the C interface.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The oscillator propagator is singular (sin ωT = 0).
    #[error("singular configuration: {0}")]
    Singularity(String),

    /// A sample landed exactly on the inverse-square-root divergence at
    /// |p| = Mω|x_f|; such points must be integrated across, not sampled.
    #[error("integrand diverges at p_c = {0}; integrate across it with the singular-window rule")]
    DivergentSample(f64),

    /// Every sample of a distribution is zero, so moments are undefined.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// Bad invocation: unknown preset, malformed key, missing field.
    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    /// Process exit status used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Domain(_) | Error::DivergentSample(_) | Error::Degenerate(_) => 3,
            Error::Singularity(_) => 4,
            Error::Io { .. } => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
