use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    EigenNotConverged { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("not a CPTP channel: {0}")]
    InvalidChannel(String),

    #[error("problem dimension {dim} exceeds the solver cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("state leaves the Bloch ball: r = {r}")]
    OutsideBlochBall { r: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
