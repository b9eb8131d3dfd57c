use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("reflector axis must be nonzero")]
    ZeroAxis,

    #[error("start vector must have unit norm (norm = {norm})")]
    NonUnitStart { norm: f64 },

    #[error("step {step} out of range for order {order}")]
    StepOutOfRange { step: usize, order: usize },

    #[error("Lanczos breakdown at step {step}: an invariant subspace was found")]
    Breakdown { step: usize },

    #[error("projected matrix is singular at step {step}")]
    SingularProjection { step: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("operator has no dense oracle view")]
    NoOracleView,

    #[error("operator action is not symmetric (defect {defect:e})")]
    AsymmetricOperator { defect: f64 },

    #[error("vector lies in the Krylov subspace: no adversarial completion exists")]
    NoAdversary,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
