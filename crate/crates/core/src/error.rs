use thiserror::Error;

use crate::matrix_classes::U1Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// A value failed one of its type invariants; the message names the first one violated.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        range: String,
    },

    #[error("constraint system is infeasible")]
    Empty,

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("dimension {dimension} exceeds the vertex enumeration cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not in U_1: {0}")]
    NotInU1(U1Violation),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("point violates the constraint system: {0}")]
    InfeasiblePoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }
}
