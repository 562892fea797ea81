use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum GspError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invalid size {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("eigenvalues are not distinct: minimum gap {gap:e} <= {threshold:e}")]
    DistinctnessViolation { gap: f64, threshold: f64 },
    #[error("eigensolver failed: {0}")]
    ConvergenceFailure(String),
    #[error("linear solve failed: {0}")]
    SolveFailure(String),
    #[error("polynomial is not monic (leading coefficient {0})")]
    NonMonic(String),
    #[error("adjacency entry at ({row}, {col}) is not an integer")]
    NonInteger { row: usize, col: usize },
    #[error("size {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("malformed companion matrix: {0}")]
    MalformedCompanion(String),
    #[error("polynomial degree {degree} exceeds {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GspError {
    /// Stable machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            GspError::NonSquare { .. } => "non_square",
            GspError::NonFinite { .. } => "non_finite",
            GspError::InvalidSize { .. } => "invalid_size",
            GspError::DimensionMismatch { .. } => "dimension_mismatch",
            GspError::InvalidPermutation(_) => "invalid_permutation",
            GspError::DistinctnessViolation { .. } => "distinctness_violation",
            GspError::ConvergenceFailure(_) => "convergence_failure",
            GspError::SolveFailure(_) => "solve_failure",
            GspError::NonMonic(_) => "non_monic",
            GspError::NonInteger { .. } => "non_integer",
            GspError::TooLarge { .. } => "too_large",
            GspError::MalformedCompanion(_) => "malformed_companion",
            GspError::DegreeTooHigh { .. } => "degree_too_high",
            GspError::EmptyInput => "empty_input",
            GspError::Parse { .. } => "parse",
            GspError::Io(_) => "io",
            GspError::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, GspError>;
