use thiserror::Error;

use crate::alist::AlistError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files, invalid parameters.
    #[error("input error: {0}")]
    Input(String),
    /// Failures that are not the caller's fault: root finding, sampling budget, I/O on output.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<ldpc_distance::Error> for CliError {
    fn from(e: ldpc_distance::Error) -> Self {
        use ldpc_distance::Error as E;
        match e {
            E::RejectionBudget { .. } => CliError::Internal(format!("{e} (raise --max-attempts)")),
            E::RootNotFound(_) => CliError::Internal(e.to_string()),
            E::Dimension(_) | E::Index(_) | E::Parse(_) | E::InvalidSpec(_) | E::Domain(_) | E::Precondition(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<AlistError> for CliError {
    fn from(e: AlistError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
