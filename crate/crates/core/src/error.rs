use std::path::PathBuf;

use thiserror::Error;

use crate::admm::IterationRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An angle or interval fell outside the visible region.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs with incompatible shapes or violated preconditions.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Projection of a zero (or non-finite-norm) vector onto the sphere.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A linear system could not be factorized or produced non-finite output.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The solver produced a non-finite iterate. Carries the trace so far.
    #[error("solver diverged at iteration {iter}: {reason}")]
    Diverged {
        iter: usize,
        reason: String,
        trace: Vec<IterationRecord>,
    },

    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },

    #[error("failed to parse config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
