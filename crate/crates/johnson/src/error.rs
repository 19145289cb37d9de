use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JohnsonError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("spectral decomposition inconsistent: {0}")]
    Spectral(String),
}

pub type Result<T> = std::result::Result<T, JohnsonError>;
