use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from its mirror by {defect:e}")]
    NonHermitian { row: usize, col: usize, defect: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has dimension zero")]
    Empty,
    #[error("operator is not positive semidefinite: eigenvalue {min_eigenvalue:e} below floor")]
    NotPsd { min_eigenvalue: f64 },
    #[error("operator is not strictly positive: smallest eigenvalue {min_eigenvalue:e}")]
    NotStrictlyPositive { min_eigenvalue: f64 },
    #[error("trace {trace} is not 1")]
    TraceMismatch { trace: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("state is zero")]
    ZeroState,
    #[error("limit criterion needs declared limits")]
    MissingLimits,
    #[error("dimension changes along the sequence (n = {n})")]
    DimVaries { n: u64 },
    #[error("reference state is not pure at n = {n}")]
    NotPure { n: u64 },
    #[error("factor {index}: sigma is not absolutely continuous with respect to rho")]
    FactorNotAc { index: u64 },
    #[error("blocks do not reassemble into the supplied states at n = {n} (residual {residual:e})")]
    BlocksInconsistent { n: u64, residual: f64 },
    #[error("invalid Gaussian parameters: {0}")]
    InvalidParams(String),
    #[error("model supplies no derivative and finite differences are disabled")]
    DerivativeUnavailable,
    #[error("derivative has a kernel component of size {defect:e} that no SLD can represent")]
    InconsistentDerivative { defect: f64 },
    #[error("observable {index} is not centred: Tr(rho B) = {mean:e}")]
    CenteringViolated { index: usize, mean: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
