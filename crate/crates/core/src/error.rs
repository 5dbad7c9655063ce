use thiserror::Error;

use crate::modular::Triple;

/// Errors raised by the library. Budget exhaustion in the search is not an
/// error; it is reported through the search outcome.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structural precondition failed on a particular residue class.
    #[error("precondition violated at residue class {index}: {reason}")]
    Precondition { index: usize, reason: String },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("coloring is not in canonical restricted-growth form; normalized colors would be {normalized:?}")]
    NonCanonical { normalized: Vec<u32> },

    /// A construction produced a coloring that failed verification.
    #[error("construction `{construction}` produced rainbow triple {triple:?}")]
    Unverified {
        construction: &'static str,
        triple: Triple,
    },

    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
