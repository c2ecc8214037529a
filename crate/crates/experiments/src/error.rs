use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] starloc_core::Error),
}

impl ExperimentError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 for bad input, 2 for I/O trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
