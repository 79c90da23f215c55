use thiserror::Error;

/// Errors raised by the certification library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input file or argument.
    #[error("input error: {0}")]
    Input(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Index(String),

    /// An operation needs a strict (rate-carrying) certificate.
    #[error("certificate is not strict (class {0})")]
    NotStrict(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
