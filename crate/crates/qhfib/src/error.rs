use crate::novikov::NovikovError;
use crate::rational::Q;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QhError {
    #[error("unknown basis label {0:?}")]
    UnknownBasisLabel(String),
    #[error("intersection pairing is degenerate")]
    DegeneratePairing,
    #[error("no triple intersection data")]
    MissingTripleData,
    #[error("{table} table is complete only up to energy {have}, need {need}")]
    TableIncomplete { table: String, need: Q, have: String },
    #[error("table entry violates the dimension rule: {0}")]
    DimensionRuleViolation(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("cutoff {0} too small")]
    CutoffTooSmall(Q),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("splitting precondition fails: {0}")]
    PrimingInvalid(String),
    #[error("fiber models differ: {0}")]
    FiberMismatch(String),
    #[error("hypothesis failed: {}", .0.join("; "))]
    HypothesisFailed(Vec<String>),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed model: {0}")]
    Malformed(String),
}

impl QhError {
    pub fn is_incomplete(&self) -> bool {
        matches!(self, QhError::TableIncomplete { .. })
    }
}

impl From<NovikovError> for QhError {
    fn from(e: NovikovError) -> Self {
        match e {
            NovikovError::NotInvertible => QhError::NotInvertible(e.to_string()),
            NovikovError::CutoffTooSmall(c) => QhError::CutoffTooSmall(c),
            NovikovError::Malformed(m) => QhError::Malformed(m),
        }
    }
}

pub type Result<T> = std::result::Result<T, QhError>;
