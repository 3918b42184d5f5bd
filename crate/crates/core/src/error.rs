use alloc::string::String;

/// Errors raised by the core pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("index {index} out of range for {len} tokens")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("not enough examples: {0}")]
    InsufficientExamples(String),
    #[error("could not parse model response: {reason} (raw: {raw:?})")]
    Parse { reason: String, raw: String },
    #[error("scoring error: {0}")]
    Scoring(String),
    #[error("split error: {0}")]
    Split(String),
    #[error("unknown error type code {0:?}")]
    UnknownCode(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
