use thiserror::Error;

use crate::qfield::QfError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] QfError),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("no stabilization within schedule: {0}")]
    NoStabilization(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Whether the error signals a library bug or a gap in the theory rather
    /// than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
