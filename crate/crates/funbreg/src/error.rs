use alloc::string::String;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A construction parameter defines an empty or inverted domain.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// An argument is out of range or malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two grid functions (or a function and a space) live on different spaces.
    #[error("incompatible measure spaces: {0}")]
    IncompatibleSpace(String),

    /// An evaluation point lies outside a functional's domain guard.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// The inputs collapse the operation (e.g. both hyperplane anchors equal).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A numerical routine failed to converge; the message carries diagnostics.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = core::result::Result<T, Error>;
