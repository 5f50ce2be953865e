use thiserror::Error;

use crate::bounds::Feasibility;
use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(ValidationReport),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("infeasible parameters: {0}")]
    Infeasible(Feasibility),

    #[error("outside the valid region: {0}")]
    Region(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("wrong model family: {0}")]
    WrongFamily(String),

    #[error("{0}")]
    Parse(String),

    #[error("model file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable category used by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModel(_) => "invalid-model",
            Error::OutOfRange { .. } => "out-of-range",
            Error::Infeasible(_) => "infeasible",
            Error::Region(_) => "region",
            Error::LengthMismatch(..) => "length-mismatch",
            Error::WrongFamily(_) => "wrong-family",
            Error::Parse(_) | Error::Json(_) => "parse",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

/// Rejects values outside `[lo, hi]` (no clamping).
pub(crate) fn check_range<T: crate::Scalar>(name: &'static str, value: &T, lo: &T, hi: &T) -> Result<()> {
    if value < lo || value > hi || value.to_f64().is_nan() {
        return Err(Error::OutOfRange {
            name,
            value: value.to_f64(),
            lo: lo.to_f64(),
            hi: hi.to_f64(),
        });
    }
    Ok(())
}
