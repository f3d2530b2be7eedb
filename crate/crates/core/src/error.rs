use thiserror::Error;

/// Errors raised by the engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands from different groups, bad parameters and similar caller mistakes.
    #[error("usage error: {0}")]
    Usage(String),
    /// A pattern was queried outside of its window.
    #[error("window error: {0}")]
    Window(String),
    /// An enumeration or size cap was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    /// Input failed validation (index sets, digit strings, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// A counting formula was requested on a window without a certified extension property.
    #[error("extension property not certified: {0}")]
    NotCertified(String),
    /// Negative interval bounds where a nonnegative operand is required.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A well-founded reduction failed to make progress. Never expected.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
