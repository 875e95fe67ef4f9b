use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A value failed an internal consistency requirement.
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// Two inputs that must share dimensions do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// The request exceeds a configured size or memory cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// An input file is malformed. Line and column are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn dimension_mismatch(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
