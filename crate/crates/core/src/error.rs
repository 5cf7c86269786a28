use thiserror::Error;

use crate::multiindex::TruncationSpec;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by ring, matrix and system operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation mismatch: {left:?} vs {right:?}")]
    SpecMismatch {
        left: TruncationSpec,
        right: TruncationSpec,
    },

    #[error("multi-index {index} outside truncation {spec:?}")]
    OutOfSpec { index: String, spec: TruncationSpec },

    #[error("invalid truncation: {0}")]
    InvalidSpec(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("factorial of {0} overflows u128")]
    FactorialOverflow(String),

    #[error("enumeration needs {needed} indices, cap is {cap}")]
    ResourceLimit { needed: u128, cap: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("composition requires r(0) = 0, got {0}")]
    CompositionDomain(String),

    #[error("A(k-l) diverges for k - l = {0} (need k > l + 1)")]
    DivergentConstant(i64),

    #[error("I - zeta*A(z) is singular at the evaluation point (relative |det| = {det:e})")]
    SingularAtPoint { det: f64 },

    #[error("recursion certificate violated at column {column}, coefficient n = {n}: residual {residual:e}")]
    InvalidRecursion {
        column: usize,
        n: usize,
        residual: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Mathematical failures, as opposed to malformed inputs.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible(_)
                | Error::CompositionDomain(_)
                | Error::DivergentConstant(_)
                | Error::SingularAtPoint { .. }
                | Error::InvalidRecursion { .. }
                | Error::FactorialOverflow(_)
                | Error::Precondition(_)
        )
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SpecMismatch { .. } => "SpecMismatch",
            Error::OutOfSpec { .. } => "OutOfSpec",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FactorialOverflow(_) => "FactorialOverflow",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::NotInvertible(_) => "NotInvertible",
            Error::CompositionDomain(_) => "CompositionDomain",
            Error::DivergentConstant(_) => "DivergentConstant",
            Error::SingularAtPoint { .. } => "SingularAtPoint",
            Error::InvalidRecursion { .. } => "InvalidRecursion",
            Error::Precondition(_) => "Precondition",
            Error::Parse(_) => "Parse",
        }
    }
}
