use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("signature violation: {positive} positive and {negative} negative eigenvalues exceed spin dimension {n}")]
    SignatureViolation {
        positive: usize,
        negative: usize,
        n: usize,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("no fixed point within product length {bound} (dimension still growing at {dim})")]
    NoFixedPoint { bound: usize, dim: usize },

    #[error("points are not spin-connectable: {0}")]
    NotSpinConnectable(String),

    #[error("infeasible starting point: {0}")]
    InfeasibleStart(String),

    #[error("line search failed after {0} backtracking steps")]
    LineSearchFailure(usize),

    #[error("maximum iterations ({0}) reached before convergence")]
    MaxIterations(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
