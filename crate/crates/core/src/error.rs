use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not fundamental: {0}")]
    NotFundamental(String),
    #[error("unreachable level: {0}")]
    Unreachable(String),
    #[error("prolongation is not finite: {0}")]
    NotFinite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
