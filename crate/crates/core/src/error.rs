use chrono::NaiveDate;
use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("line {line}: {message}")]
    InvalidRow { line: u64, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("conflicting quotes for {date}: {first} vs {second}")]
    DateConflict {
        date: NaiveDate,
        first: f64,
        second: f64,
    },

    #[error("insufficient data: {context} needs at least {needed} values, got {got}")]
    InsufficientData {
        context: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("degenerate series: zero variance")]
    DegenerateSeries,

    #[error("degenerate tolerance: standard deviation is zero so r would be 0")]
    DegenerateTolerance,

    #[error("window `{0}` contains no observations")]
    EmptyWindow(String),

    #[error("invalid window `{label}`: start {start} is after end {end}")]
    InvalidWindow {
        label: String,
        start: NaiveDate,
        end: NaiveDate,
    },

    #[error("invalid date `{0}`")]
    InvalidDate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("no template matches at length m (sample entropy undefined)")]
    NoTemplateMatches,

    #[error("no template matches at length m+1 (sample entropy infinite)")]
    NoExtendedMatches,

    #[error("rows mix statistics: expected {expected}, found {found}")]
    StatisticMismatch { expected: String, found: String },

    #[error("{series} [{window}]: {source}")]
    Window {
        series: String,
        window: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn in_window(self, series: &str, window: &str) -> Self {
        Error::Window {
            series: series.to_owned(),
            window: window.to_owned(),
            source: Box::new(self),
        }
    }
}
