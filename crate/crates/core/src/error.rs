use thiserror::Error;

/// Errors produced while building spaces or running checks on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient vector must have at least one entry")]
    Empty,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("weight at index {index} is {value}, expected a positive finite number")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("gram matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("basis has rank {rank}, expected {count} independent vectors")]
    RankDeficient { rank: usize, count: usize },

    #[error("vector is not representable in the space basis (relative residual {residual:e})")]
    NotInSpace { residual: f64 },

    #[error("z*M is not contained in M: image of basis vector {index} has relative residual {residual:e}")]
    NotInvariant { index: usize, residual: f64 },

    #[error("shift budget exceeded: {requested} exceeds the available {available}")]
    BudgetExceeded { requested: usize, available: usize },

    #[error("generator must be nonzero")]
    ZeroGenerator,

    #[error("space does not vanish at the origin, nothing to deflate")]
    NothingToDeflate,

    #[error("wandering subspace has dimension {dim}, expected 1")]
    WanderingDimNotOne { dim: usize },

    #[error("generator does not fit the window: residual {residual:e} outside the admissible domain")]
    GeneratorOutsideWindow { residual: f64 },

    #[error("hypotheses (i) and (ii) must hold before extracting a generator")]
    HypothesesNotVerified,

    #[error("zero {index} has modulus {modulus}, expected < 1")]
    ZeroOutsideDisk { index: usize, modulus: f64 },

    #[error("truncated tail mass {tail:e} exceeds {limit:e}; increase the dimension")]
    TailTooLarge { tail: f64, limit: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear algebra failure: {0}")]
    Solver(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
