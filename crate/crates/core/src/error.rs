use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty batch")]
    EmptyBatch,
    #[error("ragged rows: row {row} has {found} features, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("arity mismatch: expected {expected} features, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("insufficient rows: need at least {needed}, got {found}")]
    InsufficientRows { needed: usize, found: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("push into a full evaluation buffer (capacity {capacity})")]
    PushWhenFull { capacity: usize },
    #[error("non-finite input: {0}")]
    NonFiniteInput(f64),
    #[error("operation not valid in the {0} phase")]
    WrongPhase(&'static str),
    #[error("priming requires ground-truth labels, got a pseudo-labeled row")]
    PseudoLabelInPriming,
    #[error("length mismatch: {left} truths vs {right} predictions")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
