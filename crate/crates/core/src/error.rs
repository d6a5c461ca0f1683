use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid or run parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Fields or arrays that do not share a grid.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// A multiplier that is singular at the zero mode was used without a zero-mode policy.
    #[error("singular symbol: {0}")]
    SingularSymbol(String),

    /// Parameters outside the region where the smoothing exponents are defined.
    #[error("inadmissible parameters: {0}")]
    Admissibility(String),

    /// Parameters violating the hypotheses of a quadrature lemma check.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A lattice too coarse for the requested construction.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// A computation that would exceed the configured work budget.
    #[error("resource guard: {0}")]
    Resource(String),

    /// Some norm exceeded the blow-up threshold or became non-finite.
    #[error("numerical blow-up at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String },

    /// Malformed checkpoint or other binary input.
    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BlowUp { .. } => 3,
            Error::Io { .. } | Error::Format(_) => 4,
            _ => 2,
        }
    }
}
