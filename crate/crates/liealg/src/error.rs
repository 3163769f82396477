//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("unknown or inadmissible type label: {0}")]
    BadTypeLabel(String),
    #[error("prime {p} is bad for type {label}")]
    BadPrime { p: u64, label: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element is not defined at p = {p}: a denominator is divisible by {p}")]
    NotDefinedAtP { p: u64 },
    #[error("parabolic subset is not distinguished")]
    NotDistinguished,
    #[error("cocharacter is not integral on the coroot lattice")]
    NotIntegral,
    #[error("no Richardson candidate found within {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("not a Richardson element: {0}")]
    NotRichardson(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("linear map is not injective")]
    NotInjective,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("matrix does not lie in the group: {0}")]
    NotInGroup(String),
    #[error("gate failed: {0}")]
    GateFailed(String),
    #[error("trace form is degenerate: {0}")]
    DegenerateForm(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, LieError>;
