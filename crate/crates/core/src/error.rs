use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::Failure;

/// Why no certificate was produced. These are answers, not bugs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Refusal {
    /// A necessary condition for existence fails.
    NecessaryFail { clause: String },
    /// One of the excluded parameter sets of the existence theorem.
    PaperException { tag: String },
    /// The object is known not to exist.
    KnownImpossible { reason: String },
    /// Outside the constructive range of this implementation.
    Unsupported { trace: Vec<String> },
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refusal::NecessaryFail { clause } => write!(f, "necessary condition fails: {clause}"),
            Refusal::PaperException { tag } => write!(f, "excluded case: {tag}"),
            Refusal::KnownImpossible { reason } => write!(f, "known impossible: {reason}"),
            Refusal::Unsupported { trace } => write!(f, "unsupported: {}", trace.join("; ")),
        }
    }
}

#[derive(Debug, Error)]
pub enum HwpError {
    /// Malformed input or a violated precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A search ran out of budget before finding an answer.
    #[error("search budget exhausted for {0}")]
    Budget(String),

    /// A construction produced something the verifier rejected.
    #[error("constructed certificate failed verification: {0:?}")]
    Unverified(Vec<Failure>),

    #[error("{0}")]
    Refused(Refusal),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HwpError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(HwpError::Invalid(msg.into()))
}

pub(crate) fn impossible<T>(reason: impl Into<String>) -> Result<T> {
    Err(HwpError::Refused(Refusal::KnownImpossible { reason: reason.into() }))
}

pub(crate) fn unsupported<T>(trace: Vec<String>) -> Result<T> {
    Err(HwpError::Refused(Refusal::Unsupported { trace }))
}

pub(crate) fn exception<T>(tag: impl Into<String>) -> Result<T> {
    Err(HwpError::Refused(Refusal::PaperException { tag: tag.into() }))
}

impl HwpError {
    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            HwpError::Refused(r) => Some(r),
            _ => None,
        }
    }
}
