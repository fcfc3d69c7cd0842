//! Error type shared by the crate.

use thiserror::Error;

/// Errors raised by state construction, channels, measurements and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("truncation too small: estimated tail mass {tail_mass:e} exceeds tolerance {tail_tol:e} at dim {dim}")]
    Truncation { dim: usize, tail_mass: f64, tail_tol: f64 },

    #[error("degenerate qubit basis: alpha = {alpha} is below the qubit threshold {threshold}")]
    DegenerateBasis { alpha: f64, threshold: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("grid does not cover the state: lost probability mass {lost_mass:e}")]
    Coverage { lost_mass: f64 },

    #[error("sigma = {sigma} is outside the closed-form channel range (< {gate})")]
    OutsideGate { sigma: f64, gate: f64 },

    #[error("numerical consistency: imaginary residue {residue:e} exceeds tolerance")]
    NumericalConsistency { residue: f64 },

    #[error("root search failed: {0}")]
    Search(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Usage(_) | Error::DegenerateBasis { .. } => 2,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
