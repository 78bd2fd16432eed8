use thiserror::Error;

/// Crate-wide error type. Mathematical negatives ("no such object") are not
/// errors; they are `None`/empty values in the operation signatures.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally valid input violating an operation precondition.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The answer exists but lies outside the supported scalar fields.
    #[error("unsupported field extension: {0}")]
    Unsupported(String),
    /// A configured bound (degree cap, step budget, conductor cap) was hit.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A guaranteed identity failed to verify; indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
