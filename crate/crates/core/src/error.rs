use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An occupation or basis request is inconsistent with the Fock basis.
    #[error("basis error: {0}")]
    Basis(String),

    #[error("mode index {index} out of range for {modes} modes")]
    ModeIndex { index: usize, modes: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The discarded probability of a truncated squeezed state exceeds the
    /// requested bound.
    #[error(
        "truncation tail {tail:e} exceeds tolerance {tolerance:e} at pair cutoff {pair_cutoff}; \
         increase the pair cutoff"
    )]
    Truncation {
        tail: f64,
        tolerance: f64,
        pair_cutoff: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}
