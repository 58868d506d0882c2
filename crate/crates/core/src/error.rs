use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coordinate {index} is {value}, expected a finite nonnegative number")]
    NotInCone { index: usize, value: f64 },

    #[error("non-finite value {value} at coordinate {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("the zero vector is not allowed here")]
    ZeroVector,

    #[error("vector is not in the interior of the cone (coordinate {index} is zero)")]
    NotInterior { index: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gauge vanishes at a nonzero vector")]
    DegenerateGauge,

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inner iteration did not converge after {iterations} steps (last step {last_step:e}, lambda {lambda})")]
    InnerNotConverged {
        iterations: usize,
        last_step: f64,
        lambda: f64,
        last_iterate: Vec<f64>,
    },

    #[error("eigenpoint precondition violated: residual {residual:e} exceeds {bound:e}")]
    Precondition { residual: f64, bound: f64 },

    #[error("sandwich a*v <= x <= b*u violated at coordinate {index}")]
    SandwichViolated { index: usize },

    #[error("policy enumeration of {count} policies exceeds the guard {limit}")]
    EnumerationGuard { count: f64, limit: usize },

    #[error("certificate rejected: {0}")]
    CertificateMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
