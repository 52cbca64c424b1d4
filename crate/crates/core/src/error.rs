use thiserror::Error;

/// Errors produced by the analyzer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse ratio {0:?}: expected \"num/den\" or a decimal")]
    BadRatio(String),

    #[error("{axis} = {ratio} is outside [0, 1]")]
    RatioOutOfRange { axis: &'static str, ratio: String },

    #[error("{axis} = {ratio} is inexact for n = {n}: {axis}*n is not an integer")]
    InexactRatio {
        axis: &'static str,
        ratio: String,
        n: u64,
    },

    #[error("invalid stratum: {0}")]
    InvalidStratum(String),

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("distribution is empty (total = 0)")]
    EmptyPmf,

    #[error("bin count must be a positive odd integer, got {0}")]
    BadBinCount(usize),

    #[error("{axis} grid is not closed under r -> 1 - r (missing {missing})")]
    GridNotClosed { axis: &'static str, missing: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("record {index}: {message}")]
    BadRecord { index: usize, message: String },

    #[error("schema mismatch at {field}: {message}")]
    Schema { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
