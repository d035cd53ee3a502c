//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("design matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("design matrix has {rows} rows for {cols} columns")]
    NotEnoughRows { rows: usize, cols: usize },

    #[error("series length {len} is below the minimum of {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unsupported significance level {alpha}; supported: 0.01, 0.05, 0.10")]
    UnsupportedAlpha { alpha: f64 },

    #[error("frequency {lambda} outside the open interval (0, pi)")]
    FrequencyOutOfRange { lambda: f64 },

    #[error("lag {lag} out of range for series of length {len}")]
    LagOutOfRange { lag: i64, len: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("optimizer failed to converge within {evaluations} evaluations")]
    NonConvergence { evaluations: usize },

    #[error("invalid ARMA order ({p},{q}) for series of length {len}")]
    InvalidOrder { p: usize, q: usize, len: usize },

    #[error("no ARMA order in the ({p_max},{q_max}) grid could be fitted")]
    OrderSelectionFailed { p_max: usize, q_max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("column '{column}' not found in {path}")]
    MissingColumn { column: String, path: String },

    #[error("gap in monthly dates: expected {expected} at row {row}")]
    MonthGap { expected: String, row: usize },

    #[error("dates not strictly increasing at row {row}")]
    NonMonotoneDates { row: usize },

    #[error("non-numeric cell '{value}' in column '{column}' at row {row}")]
    NonNumericCell { row: usize, column: String, value: String },

    #[error("sentinel value {value} at interior row {row}; pass --na-drop to trim leading/trailing sentinels")]
    InteriorSentinel { row: usize, value: f64 },

    #[error("unparseable date '{value}' at row {row}")]
    BadDate { row: usize, value: String },

    #[error("date ranges do not overlap")]
    EmptyOverlap,

    #[error("replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code class: 1 for input/configuration errors, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RankDeficient { .. }
            | Error::ZeroVariance
            | Error::NonConvergence { .. }
            | Error::OrderSelectionFailed { .. }
            | Error::Replication { .. } => 2,
            _ => 1,
        }
    }
}
