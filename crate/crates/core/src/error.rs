//! Error types shared across the crate.

use thiserror::Error;

/// Violations found while validating a sequence description.
///
/// Each invariant of the sequence types maps to exactly one variant so that
/// callers (and the CLI) can report which rule was broken.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("empty sequence: at least one element is required")]
    EmptySequence,
    #[error("zero-dimensional space: space_dim must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: element {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coordinate in element {index} at position {position}")]
    NonFiniteCoordinate { index: usize, position: usize },
    #[error("non-finite weight parameter `{field}`")]
    NonFiniteWeight { field: &'static str },
    #[error("invalid basis index {index} in `{field}`: basis indices start at 1")]
    InvalidBasisIndex { field: &'static str, index: usize },
    #[error("invalid repetition count {0}: must be at least 1")]
    InvalidRepeat(usize),
    #[error("truncation plan has no sizes")]
    EmptyPlan,
    #[error("truncation sizes must be at least 1 and strictly increasing")]
    UnorderedPlan,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("basis index {index} is outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("resource limit: truncation at N = {size} needs ambient dimension {needed}, limit is {limit}")]
    ResourceLimit {
        size: usize,
        needed: usize,
        limit: usize,
    },

    #[error("unsupported structured family: {0}")]
    UnsupportedFamily(String),

    #[error(
        "degenerate frame: smallest eigenvalue {eigenvalue:e} of the span frame operator \
         is not above {threshold:e}"
    )]
    DegenerateFrame { eigenvalue: f64, threshold: f64 },

    #[error("not minimal: element {index} lies in the closed span of the others")]
    NotMinimal { index: usize },

    #[error("coefficients do not synthesize the target vector (residual {residual:e})")]
    NotARepresentation { residual: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("numerical identity check failed: {0}")]
    CheckFailed(String),

    #[error("{0}")]
    SpecFile(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
