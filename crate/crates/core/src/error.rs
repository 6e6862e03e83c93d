use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dangling endpoint {0}")]
    DanglingEndpoint(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("non-composable path {0}")]
    NonComposable(String),
    #[error("non-cyclic potential term {0}")]
    NonCyclic(String),
    #[error("operands belong to different quivers")]
    MixedQuiver,
    #[error("relation {name} has degree < 2 (relations must lie in kQ_{{>=2}})")]
    LowDegreeRelation { name: String },
    #[error("relation {name} is zero")]
    ZeroRelation { name: String },
    #[error("relation {name} is not homogeneous; exact mode needs homogeneous generators")]
    Inhomogeneous { name: String },
    #[error("truncation degree {bound} is below the maximal generator degree {needed}")]
    TruncationTooLow { bound: usize, needed: usize },
    #[error("relation set is not minimal: {name} lies in the ideal generated by the others")]
    NotMinimal { name: String },
    #[error("approximate mode: relations are inhomogeneous, exact degree-wise results are unavailable")]
    ApproximateMode,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A located error from the input language.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at line {line}, column {column}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
