use std::path::PathBuf;

use thiserror::Error;
use torwidth_core::ErrorKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Precondition(String),
    #[error("oracle disagrees: candidate width {candidate}, brute-force width {oracle}")]
    OracleDisagreement { candidate: i64, oracle: i64 },
    #[error(transparent)]
    Core(#[from] torwidth_core::Error),
}

impl CliError {
    /// 0 success, 2 malformed input, 3 precondition, 4 resource or overflow;
    /// 1 is reserved for an internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Malformed(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Write { .. } => 4,
            CliError::OracleDisagreement { .. } => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Malformed => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Resource => 4,
            },
        }
    }
}
