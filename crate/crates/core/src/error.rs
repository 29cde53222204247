use thiserror::Error;

/// Errors raised by geometry, numerics, weight evaluation and certification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {point:?} does not lie in the open domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no root: target {target} lies below g(0) = {at_zero}")]
    NoRoot { target: f64, at_zero: f64 },

    #[error("integrand returned {value} at t = {location}")]
    NonFiniteIntegrand { location: f64, value: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {estimate}, relative residual {residual:e})"
    )]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
        vector: Vec<f64>,
    },

    #[error("weight evaluates to {value} at interior point {point:?}")]
    NonFiniteWeight { point: Vec<f64>, value: f64 },

    #[error("degenerate domain: {0}")]
    Degenerate(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
