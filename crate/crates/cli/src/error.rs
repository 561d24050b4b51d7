use std::path::PathBuf;

use thiserror::Error;

/// Malformed scenario JSON, located by line and column.
#[derive(Debug, Error)]
#[error("{path}:{line}:{column}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("validation error ({invariant}): {message}")]
    Validation { invariant: &'static str, message: String },

    #[error("numerical failure ({kind}): {0}", kind = .0.kind())]
    Numerical(pbe_core::Error),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(invariant: &'static str, message: impl Into<String>) -> Self {
        CliError::Validation { invariant, message: message.into() }
    }

    /// 2 for rejected input, 3 for numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<pbe_core::Error> for CliError {
    fn from(e: pbe_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Validation { invariant: e.kind(), message: e.to_string() }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
