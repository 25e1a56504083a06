use thiserror::Error;

/// Errors raised by the algebra kernels and scenario builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),
    #[error("vector width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("matrix dimension error: {0}")]
    Dimension(String),
    #[error("determinant dimension {0} exceeds configured maximum {1}")]
    DimensionOverflow(usize, usize),
    #[error("size budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("insufficient t-precision: need M >= {needed}, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("inertia subgroup is not cyclic: {0}")]
    NonCyclicInertia(String),
    #[error("morphism verification failed: {0}")]
    MorphismCheck(String),
    #[error("complex precondition failed: {0}")]
    ComplexCheck(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("method not applicable: {0}")]
    MethodInapplicable(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
