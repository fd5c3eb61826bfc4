use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("not a Lie codifferential: [d,d] != 0")]
    NotLie,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Errors specific to contraction computations.
#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("negative exponent on a nonzero entry: the limit does not exist")]
    NegativeExponent,
    #[error("negative t-valuation in conjugated matrix: the limit does not exist")]
    NegativeValuation,
    #[error("not a contraction: {0}")]
    NotAContraction(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Errors from the miniversal deformation solver.
#[derive(Debug, Error)]
pub enum MiniversalError {
    #[error("projection onto the (alpha, beta, tau) frame failed: {0}")]
    ProjectionFailure(String),
    #[error("curve violates a base relation: {0}")]
    RelationViolated(String),
    #[error("arity mismatch: expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Errors from catalog identification.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("input is not equivalent to any catalog instantiation under the implemented invariants")]
    Unclassified,
    #[error("unknown catalog label `{0}`")]
    UnknownLabel(String),
    #[error("bad parameter count for `{label}`: expected {expected}, got {got}")]
    BadArity { label: String, expected: usize, got: usize },
    #[error("projective parameters must not all be zero")]
    AllZeroParams,
    #[error(transparent)]
    Core(#[from] CoreError),
}
