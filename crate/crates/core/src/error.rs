use thiserror::Error;

/// Errors raised by the analytics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("series is degenerate: {0}")]
    Degenerate(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dates must be strictly increasing (violation at position {0})")]
    UnorderedDates(usize),

    #[error("non-positive or non-finite rate {value} at position {index}")]
    NonPositiveRate { index: usize, value: f64 },

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("regressors are collinear")]
    Collinear,

    #[error("optimizer did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("every candidate model failed to fit")]
    AllFitsFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
