use thiserror::Error;

use crate::model::PenaltyKind;
use crate::solvers::Status;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("at least 2 points are required, got {0}")]
    TooFewPoints(usize),

    #[error("abscissas and ordinates differ in length ({xs} vs {ys})")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("non-finite {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("duplicate abscissa {value} at input positions {first} and {second}")]
    DuplicateAbscissa {
        value: f64,
        first: usize,
        second: usize,
    },

    #[error("broken line has {found} ordinates but the point set has {expected}")]
    LineLength { expected: usize, found: usize },

    #[error("penalty coefficient must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),

    #[error("epsilon must be finite and positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("objective evaluation produced a non-finite value at index {index}")]
    NonFiniteEvaluation { index: usize },

    #[error("operation not available for the {0:?} penalty")]
    UnsupportedKind(PenaltyKind),

    #[error("fit did not converge (status {0:?})")]
    NotConverged(Status),

    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("angle system residual {residual:e} exceeds {tolerance:e}")]
    AngleSystemInconsistent { residual: f64, tolerance: f64 },
}
