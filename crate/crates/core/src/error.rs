use std::path::PathBuf;

use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation
    /// (negative radius, time past a blow-up horizon, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A warping function fails the model-manifold requirements.
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    /// An API contract was violated (empty grid, missing bound, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested (m, p) pair lies outside the validity range of the
    /// requested barrier recipe.
    #[error("parameters outside regime: {0}")]
    Regime(String),

    /// The deterministic parameter search exhausted its schedule without
    /// certifying a barrier. Carries the worst normalized margin seen.
    #[error("synthesis failed: {detail} (worst margin {worst_margin:.3e})")]
    SynthesisFailed { detail: String, worst_margin: f64 },

    /// The explicit scheme produced a non-finite value.
    #[error("numerical failure at cell {cell}, t = {time:.6e}: {detail}")]
    Numerical {
        cell: usize,
        time: f64,
        detail: String,
    },

    /// Configuration file could not be parsed or is incomplete.
    #[error("config error: {0}")]
    Config(String),

    /// I/O failure, with the path that produced it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
