use thiserror::Error;

/// Errors produced while building operators, solving eigenproblems or
/// assembling bound reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "operator `{label}` is not Hermitian: |A[{row},{col}] - conj(A[{col},{row}])| = {deviation:.3e}"
    )]
    NotHermitian {
        label: String,
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator index {index} out of range for a set of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("vector is not swap-symmetric: asymmetry norm {asymmetry:.3e}")]
    NotSwapSymmetric { asymmetry: f64 },

    #[error(
        "eigensolver did not converge after {iterations} iterations (best residual {best_residual:.3e})"
    )]
    NotConverged {
        iterations: usize,
        best_residual: f64,
    },

    #[error("eigensolver failed at alpha = {alpha}: {source}")]
    AlphaScan {
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("parity symmetry violated: |e(alpha) - e(-alpha)| = {deviation:.3e} at alpha = {alpha}")]
    ParityViolation { alpha: f64, deviation: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl Error {
    /// True when the failure is an eigensolver that ran out of restarts,
    /// possibly inside an α-scan.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Error::NotConverged { .. } => true,
            Error::AlphaScan { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
