use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),

    #[error("generator index {index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("pole at specialization: {0}")]
    PoleAtSpecialization(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("malformed expression: {0}")]
    MalformedExpression(String),

    #[error("diagram not permissible: {0}")]
    NotPermissible(String),

    #[error("incompatible scalar kinds: {0}")]
    MixedScalarKinds(String),
}

pub type Result<T> = std::result::Result<T, Error>;
