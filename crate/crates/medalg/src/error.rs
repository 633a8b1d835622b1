use std::path::PathBuf;

use medalg_core::{MedianError, Violation};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Median(#[from] MedianError),
    #[error("point {point}: coordinate {value} is not a chain position")]
    CoordinateRange { point: usize, value: i64 },
    #[error("chain length {0} is outside 1..=65535")]
    FactorRange(u64),
    #[error("corpus generation gave up after {tries} tries: {what}")]
    RetryExhausted { tries: usize, what: String },
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("invalid corpus spec: {0}")]
    Spec(String),
    #[error("{0}")]
    Input(String),
    #[error("check failed: {0}")]
    Check(Violation),
}

impl From<Violation> for HarnessError {
    fn from(v: Violation) -> Self {
        HarnessError::Check(v)
    }
}
