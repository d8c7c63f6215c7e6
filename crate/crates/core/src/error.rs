use thiserror::Error;

/// Errors raised by the simulator core and the layers built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("size error: {0}")]
    Size(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
