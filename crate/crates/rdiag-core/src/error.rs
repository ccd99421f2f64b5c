//! Error type shared across the crate.

/// Errors surfaced by the combinatorics and numerics engines.
///
/// The variants map onto the process exit codes used by the CLI:
/// everything except [`Error::Resource`] is a validation failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed textual input, with the byte offset of the offending token.
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    /// Arguments outside an operation's domain (unbalanced string, wrong
    /// run count, spec too short, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A guard tripped before an enumeration could exhaust memory or time.
    #[error("resource guard: {0}")]
    Resource(String),

    /// A moment sequence that cannot come from a genuine measure
    /// (negative Gram-Schmidt norm).
    #[error("invalid moment sequence: {0}")]
    InvalidMoments(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
