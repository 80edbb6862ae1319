use thiserror::Error;

/// Failures shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("no bound state: energy {energy} is not below the asymptote {asymptote}")]
    NoBoundState { energy: f64, asymptote: f64 },
    #[error("no classical region: energy {energy} lies below the potential minimum {minimum}")]
    NoClassicalRegion { energy: f64, minimum: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("state with {nodes} nodes not found: {reason}")]
    StateNotFound { nodes: u32, reason: String },
    #[error("calibration failed: {0}")]
    CalibrationFailure(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for field `{field}` at line {line}: {message}")]
    Validation {
        field: String,
        line: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}
