use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("covariance parameter theta must be positive and finite, got {0}")]
    NonPositiveTheta(f64),
    #[error("unknown covariance family `{0}`")]
    UnknownFamily(String),
    #[error("unknown profile `{0}`")]
    UnknownProfile(String),
    #[error("closed-form aliased sum is only available for the exponential family")]
    ClosedFormUnavailable,
    #[error("aliased sum did not reach tolerance {tolerance:e} within {terms} terms")]
    NoConvergence { tolerance: f64, terms: usize },
    #[error("quadrature failed: estimated error {error:e} after {subdivisions} subdivisions")]
    QuadratureFailure { error: f64, subdivisions: usize },
    #[error("invalid grid design: {0}")]
    InvalidDesign(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sample size must be at least 2, got {0}")]
    BadSampleSize(usize),
    #[error("covariance matrix is not positive definite even with jitter {jitter:e}")]
    NotPositiveDefinite { jitter: f64 },
    #[error("test point {0} lies outside the training interval")]
    ExtrapolationRequest(f64),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("replicate {index}: {source}")]
    Replicate { index: usize, source: Box<Error> },
    #[error("sample is empty")]
    EmptySample,
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 5 non-zero paired differences, got {0}")]
    TooFewPairs(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("cell {cell}: {source}")]
    Cell { cell: String, source: Box<Error> },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// True for errors caused by bad user input rather than a numerical or
    /// I/O failure during a run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation { .. }
                | Error::UnknownFamily(_)
                | Error::UnknownProfile(_)
                | Error::NonPositiveTheta(_)
                | Error::BadSampleSize(_)
                | Error::InvalidArgument(_)
                | Error::InvalidDesign(_)
        )
    }
}
