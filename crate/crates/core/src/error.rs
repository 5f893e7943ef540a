use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("context mismatch")]
    ContextMismatch,
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("family {0} missing in target context")]
    MissingFamily(String),
    #[error("arity mismatch for family {0}")]
    ArityMismatch(String),
    #[error("not divisible: nonzero remainder when dividing by {0}")]
    NotDivisible(String),
    #[error("no boundary assignment for generator {0}")]
    UnassignedGenerator(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("inhomogeneous element where a homogeneous one is required")]
    Inhomogeneous,
    #[error("{0}")]
    Invalid(String),
}
