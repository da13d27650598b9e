use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("register label collision: {0}")]
    RegisterCollision(String),

    #[error("unknown register label: {0}")]
    UnknownRegister(String),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("infeasible decomposition: p = {p} exceeds max_p = {max_p}")]
    InfeasibleDecomposition { p: f64, max_p: f64 },

    #[error("chain too large for the full-tensor path (N = {0} > 5); use bd_chain or outcome_distribution")]
    ChainTooLarge(usize),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("SDP solve failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
