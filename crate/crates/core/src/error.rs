use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// The variants are grouped by what the caller should do about them: fix the
/// input (`Parse`, `Malformed`), raise a budget (`Horizon`), or treat the
/// result as a genuine failure of a checked law (`Violation`, `Precondition`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    /// A search or an enumeration ran past its budget. Not a counterexample.
    #[error("horizon exhausted: {0}")]
    Horizon(String),

    #[error("invariant violated at {at}: {message}")]
    Violation { at: String, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    pub fn violation(at: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Violation { at: at.into(), message: message.into() }
    }

    pub fn horizon(message: impl Into<String>) -> Self {
        Error::Horizon(message.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Malformed(_) => 2,
            Error::Horizon(_) => 3,
            Error::Violation { .. } | Error::Precondition(_) => 1,
        }
    }

    pub fn is_horizon(&self) -> bool {
        matches!(self, Error::Horizon(_))
    }
}
