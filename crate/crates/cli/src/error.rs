use std::path::PathBuf;

use thiserror::Error;
use trades::TradeError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Trade(#[from] TradeError),
    #[error("{failed} of {total} records failed verification")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 1 for verification failures, 2 for everything the caller got wrong.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
