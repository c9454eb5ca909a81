use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {requested} exceeds table capacity {capacity}")]
    Capacity { requested: usize, capacity: usize },

    /// Argument landed on a pole; `at` is the integer that was hit.
    #[error("pole at {at}")]
    Pole { at: i64 },

    #[error("tolerance {target:e} not met, best estimate {achieved:e}")]
    ToleranceNotMet { achieved: f64, target: f64 },

    #[error("evaluation point x = {x} outside domain (x > {min} required)")]
    Domain { x: f64, min: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "no convergence after {iterations} iterations, best iterate {best} (residual {residual:e})"
    )]
    Convergence {
        iterations: usize,
        best: f64,
        residual: f64,
    },

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("capability unavailable: {0}")]
    Capability(String),

    /// File or serialization failure, with the path or format as context.
    #[error("{0}")]
    Io(String),

    #[error("non-finite value produced by {context} (value {value})")]
    NonFinite {
        context: &'static str,
        value: Complex64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(context: &'static str, value: Complex64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { context, value })
    }
}
