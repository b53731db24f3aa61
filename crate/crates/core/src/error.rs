use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Series division by a divisor whose order is positive or not determined.
    #[error("series division by a non-unit (divisor order {order})")]
    NonUnitDivisor { order: String },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degenerate presentation: {0}")]
    Degenerate(String),
    #[error("arc does not lie on {variety}: generator {generator} has nonzero coefficient at t^{index}")]
    ArcViolation {
        variety: String,
        generator: usize,
        index: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("enumeration budget of {budget} candidate checks exceeded at level {level}")]
    BudgetExceeded { budget: u64, level: usize },
    #[error("level {requested} out of range for jet of level {level}")]
    LevelOutOfRange { requested: usize, level: usize },
    #[error("jet enumeration requires a prime field, got {0}")]
    NotFinite(String),
    #[error("{count} jets have undetermined liftability")]
    Undetermined { count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatherError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("free rank {found} does not match claimed dimension {expected}")]
    FreeRankMismatch { expected: usize, found: usize },
    #[error("insufficient precision: orders undetermined at precision cap {cap}")]
    InsufficientPrecision { cap: usize, partial: Vec<String> },
    #[error("arc is not generically transverse: det A has order >= {precision}")]
    NotGenericallyTransverse { precision: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegratorError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Mather(#[from] MatherError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("parameter {name} = {value} outside its range")]
    OutOfRange { name: String, value: i64 },
    #[error("weight configuration is not summable: {0}")]
    NotSummable(String),
    #[error("counting measure not stable: level {n} gives {at_n}, level {n1} gives {at_n1}")]
    Unstable {
        n: usize,
        n1: usize,
        at_n: String,
        at_n1: String,
    },
    #[error("unknown catalog example {0}")]
    UnknownExample(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}
