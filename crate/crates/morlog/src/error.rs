//! Crate-wide error type.
//!
//! Every fallible operation reports which mathematical precondition failed,
//! so a caller can distinguish "the input is outside the domain" from "the
//! requested precision cannot be met" from "an internal identity broke".

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input violates a mathematical precondition (wrong congruence,
    /// non-unit where a unit is required, division that is not exact, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested precision or truncation cannot be achieved.
    #[error("precision error: {0}")]
    Precision(String),

    /// An enumeration or computation exceeds the configured work bound.
    #[error("resource error: {0}")]
    Resource(String),

    /// A verification step failed: an identity that was asserted to hold
    /// came out false under exact computation.
    #[error("verification failure: {0}")]
    Verification(String),

    /// Invalid caller-supplied configuration (CLI / FFI parameter errors).
    #[error("usage error: {0}")]
    Usage(String),

    /// An internal invariant broke; indicates a bug in this crate.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
