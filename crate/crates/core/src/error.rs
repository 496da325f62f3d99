use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoresetError>;

#[derive(Debug, Error)]
pub enum CoresetError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("dataset has {n} points, at least {required} are required")]
    TooFewPoints { n: usize, required: usize },

    #[error("dataset is already preprocessed")]
    AlreadyPreprocessed,

    #[error("dataset must be preprocessed (centered and scaled) first")]
    NotPreprocessed,

    #[error("solver diverged after {iterations} iterations (objective {objective:e})")]
    Diverged { iterations: usize, objective: f64 },

    #[error("degenerate reference objective: f(P, w_full) = 0")]
    DegenerateReference,

    #[error("serialization error: {0}")]
    Serde(String),
}

impl CoresetError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CoresetError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        CoresetError::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for CoresetError {
    fn from(e: serde_json::Error) -> Self {
        CoresetError::Serde(e.to_string())
    }
}
