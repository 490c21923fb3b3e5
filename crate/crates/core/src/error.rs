use thiserror::Error;

/// Errors raised by input validation and internal numerical checks.
#[derive(Debug, Error)]
pub enum Error {
    /// An input failed a precondition (dimension, range, or invariant).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A computation produced a value that violates an internal guarantee,
    /// beyond what floating-point noise can explain.
    #[error("internal consistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
