use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Certificate failed, or a sweep found invariant violations.
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
    pub const MISMATCH: i32 = 5;
    pub const SELF_CHECK: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("numerical failure: {0}")]
    Numerical(qsd_core::Error),

    #[error("{0}")]
    Mismatch(String),

    #[error("{0} example value(s) disagree with their closed forms")]
    SelfCheck(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse(_) => exit::PARSE,
            CliError::Write { .. } => exit::PARSE,
            CliError::Invalid(_) => exit::VALIDATION,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Mismatch(_) => exit::MISMATCH,
            CliError::SelfCheck(_) => exit::SELF_CHECK,
        }
    }
}

impl From<qsd_core::Error> for CliError {
    fn from(err: qsd_core::Error) -> Self {
        use qsd_core::Error as E;
        match err {
            E::NumericalFailure | E::SingularNormalizer => CliError::Numerical(err),
            E::ArityMismatch { .. } | E::IndexOutOfRange { .. } | E::WrongArity(_) => {
                CliError::Mismatch(err.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
