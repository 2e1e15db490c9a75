use std::fmt;

/// Errors produced by construction, estimation and export routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument is outside its mathematical domain (for example a
    /// non-positive SNR or a target error probability outside (0, 1)).
    Domain(String),
    /// A message-split tuple violates the admissible region of the
    /// deterministic model.
    Infeasible(String),
    /// The request is structurally valid but not supported by the
    /// construction (for example a QAM order that is not an even power of
    /// two).
    Unsupported(String),
    /// Channel and role parameters are inconsistent with each other.
    Config(String),
    /// A bit sequence does not match the symbol mapping it was offered to.
    Mapping(String),
    /// File output failed; the message carries the path for context.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible design point: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Mapping(msg) => write!(f, "mapping error: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
