use std::fmt;

use thiserror::Error;

use crate::domain::SampleTally;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{field} = {value} is outside {expected}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("degenerate query: {0}")]
    Degenerate(String),

    #[error("bound is degenerate: {0}")]
    DomainError(&'static str),

    #[error("invalid tester interval: theta1 = {theta1} must be below theta2 = {theta2} inside [0, 1]")]
    InvalidInterval { theta1: f64, theta2: f64 },

    #[error("invalid per-call confidence {0}: expected 0 < delta < 1")]
    InvalidConfidence(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Oracle(#[from] OracleError),

    #[error(transparent)]
    Model(#[from] NnError),

    #[error("no probed epsilon produced a Yes verdict")]
    NoYesFound { probes: Vec<crate::robustness::Probe> },

    #[error("wall-time limit reached")]
    Timeout,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Failure raised while drawing trials from an oracle.
///
/// `partial` holds the trials that completed (in trial-index order) before
/// the failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} (after {} trials, {} successes)", .partial.trials(), .partial.successes())]
pub struct OracleError {
    pub kind: OracleErrorKind,
    pub partial: SampleTally,
}

impl OracleError {
    pub fn new(kind: OracleErrorKind) -> Self {
        Self {
            kind,
            partial: SampleTally::empty(),
        }
    }

    pub fn with_partial(mut self, partial: SampleTally) -> Self {
        self.partial = partial;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleErrorKind {
    SpawnFailure(String),
    ProtocolViolation(String),
    ChildExit(String),
    Model(NnError),
    Io(String),
}

impl fmt::Display for OracleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleErrorKind::SpawnFailure(msg) => write!(f, "failed to spawn oracle process: {msg}"),
            OracleErrorKind::ProtocolViolation(msg) => write!(f, "oracle protocol violation: {msg}"),
            OracleErrorKind::ChildExit(msg) => write!(f, "oracle process exited: {msg}"),
            OracleErrorKind::Model(err) => write!(f, "model evaluation failed: {err}"),
            OracleErrorKind::Io(msg) => write!(f, "oracle i/o failure: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NnError {
    #[error("model parse error: {0}")]
    ParseError(String),

    #[error("model shape error: {0}")]
    ShapeError(String),

    #[error("non-finite value in layer {layer}")]
    NonFiniteWeight { layer: usize },

    #[error("model input dimension is {expected}, got a vector of length {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
