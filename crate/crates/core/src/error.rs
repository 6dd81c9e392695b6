//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed file contents (image, manifest, weight file, CSV).
    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },

    /// Invalid argument or configuration value.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    /// A quantity required by an operation is degenerate (zero variance,
    /// empty set, singular covariance).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub fn degenerate(message: impl Into<String>) -> Self {
        Error::Degenerate(message.into())
    }

    /// Process exit code for the CLI: 1 for validation problems, 2 for
    /// runtime and i/o failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::ShapeMismatch { .. } | Error::Degenerate(_) => 1,
            Error::Io { .. } | Error::Format { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
