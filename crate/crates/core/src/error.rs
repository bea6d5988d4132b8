use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integral does not converge: {0}")]
    NonIntegrable(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("function is not convex near t = {at}")]
    NotConvex { at: f64 },
    #[error("could not bracket a minimum: {0}")]
    BracketFailure(String),
    #[error("iteration diverged: {0}")]
    Diverging(String),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid dimensions: n = {n}, k = {k}")]
    InvalidDims { n: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
