use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested size is beyond what exact enumeration supports.
    #[error("capacity exceeded: {what} supports n <= {max}, got n = {n}")]
    Capacity { what: &'static str, n: usize, max: usize },

    /// A measurement was asked for a definite answer that the state does not
    /// provide (off-promise protocol input).
    #[error("outcome is not deterministic: {0}")]
    NonDeterministic(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
