use thiserror::Error;

/// Errors raised by parameter validation and the procedure engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("invalid gamma {input:?}: {reason}")]
    Gamma { input: String, reason: String },
    #[error("length mismatch: expected {expected}, got {actual}")]
    Length { expected: usize, actual: usize },
    #[error("invalid p-value at position {index}: {value}")]
    PValue { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
