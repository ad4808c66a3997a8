use thiserror::Error;

/// Errors shared by all toolkit modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix decomposition failed: {0}")]
    Decomposition(String),

    #[error("quadrature accuracy check failed: {0}")]
    Accuracy(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no crossing: {0}")]
    NoCrossing(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
