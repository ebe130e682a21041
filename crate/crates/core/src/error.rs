use thiserror::Error;

/// Errors produced by channel construction, the boundary solvers and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("channels h{0}{0} and h{0}{1} are colinear (kappa = {2})")]
    ColinearChannels(usize, usize, f64),

    #[error("channels h{0}{0} and h{0}{1} are orthogonal (kappa = {2})")]
    OrthogonalChannels(usize, usize, f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("target SINR {gamma} exceeds the feasible maximum {max}")]
    InfeasibleTarget { gamma: f64, max: f64 },

    #[error("negative radicand {0} when solving for x2")]
    InfeasibleRadicand(f64),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("f(x1) is singular at x1 = {0}")]
    SingularAtZero(f64),

    #[error("the polynomial is identically zero")]
    AllZeroCoefficients,

    #[error("empty input")]
    EmptyInput,

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
