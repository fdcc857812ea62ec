use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Sparse data violating its format invariants (ordering, bounds, duplicates).
    #[error("format error: {0}")]
    Format(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("row index cache is stale or belongs to another matrix")]
    StaleCache,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    /// Non-positive curvature `pᵀKp` met inside PCG; the operator data is corrupt.
    #[error("operator is not positive definite (pᵀKp = {curvature:e} at PCG iteration {iteration})")]
    NotPositiveDefinite { iteration: usize, curvature: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(what: &'static str, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { what, expected, got }
    }
}
