//! Error type shared across the crate.
//!
//! The variants map onto the CLI exit codes: `Input` and `Domain` are
//! malformed or out-of-contract inputs (exit 2), `Validation` and
//! `LinearClass` are well-formed inputs that fail a mathematical check
//! (exit 1), `Resource` means a configured enumeration cap was exceeded.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: unknown ids, bad JSON shapes, unparsable scalars.
    #[error("input error: {0}")]
    Input(String),

    /// Structurally valid input outside an operation's domain
    /// (e.g. a half edge passed to an operation defined on links).
    #[error("domain error: {0}")]
    Domain(String),

    /// A mathematical validation failed; the message carries the witness.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A set of circles is not a linear class; carries the offending theta.
    #[error("linear class violated: theta {theta:?} has exactly 2 balanced circles")]
    LinearClass { theta: [Vec<String>; 3] },

    /// An enumeration exceeded its configured cap.
    #[error("resource cap exceeded: {0} (cap {1})")]
    Resource(String, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Exit code the CLI should use for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Domain(_) => 2,
            Error::Validation(_) | Error::LinearClass { .. } => 1,
            Error::Resource(..) => 2,
        }
    }
}
