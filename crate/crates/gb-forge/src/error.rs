use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller handed in something outside an operation's domain
    /// (zero modulus, disconnected generator set, malformed literal, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A size guard tripped: the instance is structurally valid but larger
    /// than the operation is willing to process exactly.
    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    /// An internal cross-check failed. This is a bug, not a user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Classification cache or table output could not be read or written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
