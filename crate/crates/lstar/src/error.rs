use thiserror::Error;

/// Errors surfaced to callers. Anything else (violated theorem identities,
/// impossible internal states) is a bug and panics via `assert!`.
#[derive(Debug, Error)]
pub enum Error {
    /// The input violates a precondition (malformed matrix, non-exact
    /// sequence, non-squarefree d, ...).
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// A numerical routine could not reach the requested accuracy.
    #[error("precision failure: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::RejectedInput(msg.into()))
}
