use thiserror::Error;

/// Errors produced by the codec, the transforms and the memory model.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("value {value} at index {index} does not fit in {bits} signed bits")]
    Range { index: usize, value: i64, bits: u32 },

    #[error("corrupt stream in window {window}: {reason}")]
    CorruptStream { window: usize, reason: String },

    #[error("bank plan needs {needed} banks per channel but only {available} are available")]
    Capacity { needed: u64, available: u64 },

    #[error("format error: {0}")]
    Format(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn corrupt(window: usize, reason: impl Into<String>) -> Self {
        Error::CorruptStream {
            window,
            reason: reason.into(),
        }
    }
}
