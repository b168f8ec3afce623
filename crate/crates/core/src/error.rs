use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports.
///
/// Display strings start with the variant name so command-line diagnostics
/// identify the failing condition directly.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("MalformedRow: row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("DuplicateDate: {0} appears more than once")]
    DuplicateDate(NaiveDate),
    #[error("EmptySeries: no usable observations")]
    EmptySeries,
    #[error("UnknownColumn: no column named {0:?} in header")]
    UnknownColumn(String),
    #[error("InvalidSeries: {0}")]
    InvalidSeries(String),
    #[error("GapTooLarge: {gap_days}-day gap after {after} exceeds max_gap_days={max_gap_days}")]
    GapTooLarge {
        after: NaiveDate,
        gap_days: i64,
        max_gap_days: u32,
    },
    #[error("GapFound: {gap_days}-day gap after {after}")]
    GapFound { after: NaiveDate, gap_days: i64 },
    #[error("SingularFit: trend design matrix is rank-deficient")]
    SingularFit,
    #[error("DegenerateSeries: AR normal equations are singular")]
    DegenerateSeries,
    #[error("InsufficientData: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("InsufficientHistory: need at least {needed} values, got {got}")]
    InsufficientHistory { needed: usize, got: usize },
    #[error("SeriesTooShort: {len} observations cannot hold one state of dimension {dimension} with delay {delay}")]
    SeriesTooShort {
        len: usize,
        dimension: usize,
        delay: usize,
    },
    #[error("NegativeThreshold: {0}")]
    NegativeThreshold(f64),
    #[error("SizeMismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("WindowTooLarge: window {window} does not fit a matrix of size {size}")]
    WindowTooLarge { window: usize, size: usize },
    #[error("ImageTooLarge: {width}x{height} exceeds the budget of {budget} pixels")]
    ImageTooLarge {
        width: u64,
        height: u64,
        budget: u64,
    },
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("Encoding: {0}")]
    Encoding(String),
}

impl Error {
    /// Bare variant name, e.g. `"DegenerateSeries"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedRow { .. } => "MalformedRow",
            Error::DuplicateDate(_) => "DuplicateDate",
            Error::EmptySeries => "EmptySeries",
            Error::UnknownColumn(_) => "UnknownColumn",
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::GapTooLarge { .. } => "GapTooLarge",
            Error::GapFound { .. } => "GapFound",
            Error::SingularFit => "SingularFit",
            Error::DegenerateSeries => "DegenerateSeries",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::InsufficientHistory { .. } => "InsufficientHistory",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::NegativeThreshold(_) => "NegativeThreshold",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::ImageTooLarge { .. } => "ImageTooLarge",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Encoding(_) => "Encoding",
        }
    }
}
