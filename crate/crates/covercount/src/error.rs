//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A graph failed validation (self-loop, duplicate edge, bad endpoint, ...).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// An operation was asked for something outside its contract
    /// (missing edge, root out of range, malformed witness, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A size guard was exceeded (brute-force edge limit, core vertex limit, ...).
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    /// Integer arithmetic would have overflowed; counts must never wrap silently.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
