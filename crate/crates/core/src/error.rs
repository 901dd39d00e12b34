use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SeriationError>;

#[derive(Debug, Error)]
pub enum SeriationError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("empty input vector")]
    EmptyInput,

    #[error("mode {mode} out of range 1..={n}")]
    ModeOutOfRange { mode: usize, n: usize },

    #[error("row index {index} out of range for {n_rows} rows")]
    RowOutOfRange { index: usize, n_rows: usize },

    #[error("column {col} is not increasing (row {row} > row {next})", next = row + 1)]
    NotMonotone { col: usize, row: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "exhaustive least squares over n = {n} rows would enumerate n! permutations; \
         the cap is {cap} (raise it explicitly to proceed)"
    )]
    TooManyRows { n: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot take log10 of non-positive loss {loss} at n = {n}; add noise so losses are positive")]
    NonPositiveLoss { n: usize, loss: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SeriationError {
    pub(crate) fn dims(expected: impl Into<String>, actual: impl Into<String>) -> Self {
        SeriationError::DimensionMismatch {
            expected: expected.into(),
            actual: actual.into(),
        }
    }
}
