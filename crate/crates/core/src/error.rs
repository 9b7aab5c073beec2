//! Error types shared across the crate.

use thiserror::Error;

/// Malformed pattern text. `position` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern syntax error at {position}: {message}")]
pub struct PatternSyntaxError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("extract {from}..{to} is out of range for a source of {len} tokens")]
    IndexOutOfRange { from: usize, to: usize, len: usize },
    #[error("plan is empty")]
    EmptyPlan,
    #[error("string does not match the source pattern")]
    NoMatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("no branch transforms source pattern {0}")]
    UnknownSource(String),
    #[error("alternate {index} does not exist ({available} available)")]
    IndexOutOfRange { index: usize, available: usize },
}
