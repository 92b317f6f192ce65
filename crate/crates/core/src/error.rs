use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{what} with {size} points exceeds the enumeration cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("no value for {0}")]
    Missing(String),
    #[error("model error at {pointer}: {message}")]
    Model { pointer: String, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}
