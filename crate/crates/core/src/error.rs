use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid index: {0}")]
    Index(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid ensemble: {0}")]
    InvalidSpec(String),
    #[error(
        "configuration-model sampler gave up after {attempts} attempts \
         ({collisions} rejected for repeated edges)"
    )]
    RejectionBudget { attempts: u32, collisions: u32 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("root finding failed: {0}")]
    RootNotFound(String),
    #[error("{0}")]
    Precondition(String),
}
