use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped by how a caller is expected to react: usage and
/// domain errors are programming mistakes, `Infeasible` and `Guard` are
/// parameter problems that a front end reports to the user, and
/// `DecodeFailure` is an ordinary outcome of decoding a noisy word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible parameters: constraint `{constraint}` violated")]
    Infeasible { constraint: String },

    #[error("exhaustive guard exceeded: {0}")]
    Guard(String),

    #[error("decoding failed: {0}")]
    DecodeFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
