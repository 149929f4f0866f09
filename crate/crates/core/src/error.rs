use thiserror::Error;

use crate::canonical::CanonLabel;
use crate::subalg::DecompositionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} already has a square root in the base field")]
    AlreadySquare(String),

    #[error("invalid quadratic extension: {0}")]
    InvalidExtension(String),

    #[error("cannot parse scalar {text:?}: {reason}")]
    ParseScalar { text: String, reason: String },

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("matrix is not upper triangular")]
    NotUpperTriangular,

    #[error("conjugating matrix is singular")]
    SingularConjugator,

    #[error("degenerate automorphism parameters: {0}")]
    DegenerateAutomorphism(&'static str),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("subspace is not closed: b{left} * b{right} = {product} leaves a residual {residual}")]
    NotClosed {
        left: usize,
        right: usize,
        product: String,
        residual: String,
    },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(DecompositionReport),

    #[error("operation not supported in characteristic {0}")]
    BadCharacteristic(u64),

    #[error("complement basis restricted to pivot coordinates is singular")]
    NotComplement,

    #[error("M is not one of the fixed subalgebras M6, M5a, M5b")]
    UnsupportedComplement,

    #[error("the idempotent basis vector is the identity, so the input is unital")]
    UnitalContradiction,

    #[error("a square root of {0} is required; rerun with field extension enabled")]
    RequiresExtension(String),

    #[error("work budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("polynomial system invalid: {0}")]
    InvalidSystem(String),

    #[error("fingerprints of {0} and {1} coincide")]
    SeparationFailure(CanonLabel, CanonLabel),

    #[error("zero weight is not allowed for splitting operators")]
    ZeroWeight,

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("schema: {0}")]
    Schema(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn mismatch(left: impl ToString, right: impl ToString) -> Self {
        Error::DescriptorMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    /// True for errors that indicate a defect in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
