use thiserror::Error;

use crate::sdr::SdrSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigendecomposition did not converge for a {0}x{0} matrix")]
    Eigendecomposition(usize),

    /// The splitting solver hit its iteration cap. The best iterate is kept
    /// so callers can still inspect or round it.
    #[error(
        "SDR solver did not converge after {} iterations (primal {:.3e}, dual {:.3e})",
        .0.iterations, .0.primal_residual, .0.dual_residual
    )]
    NotConverged(Box<SdrSolution>),

    #[error("instance too large for exhaustive search: N = {n} exceeds limit {max_n}")]
    InstanceTooLarge { n: usize, max_n: usize },

    #[error("scenario parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario field `{field}`: {message}")]
    Scenario { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
