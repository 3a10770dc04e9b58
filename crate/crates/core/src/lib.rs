//! Regularity analysis of exchange-rate returns.
//!
//! The pipeline reads daily quotes ([`ingest`]), turns them into log returns
//! and moment statistics ([`series`]), measures Approximate and Sample
//! Entropy ([`entropy`]) and compares entropy before and after crisis
//! windows ([`regime`]). [`cli`] wires the stages into the `fxentropy`
//! command.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod ingest;
pub mod regime;
pub mod render;
pub mod scalar;
pub mod series;

pub use entropy::{
    apen, chebyshev_distance, entropy, fast_apen, fast_sampen, match_counts, sampen,
    tolerance_from_sd, Convention, Engine, EntropyParams, EntropyResult, MatchCounts,
    ResolvedParams, Statistic, Tolerance,
};
pub use error::{Error, Result};
pub use ingest::{
    load_series, normalize, parse_csv, ColumnRef, CsvConfig, DateFormat, DatedSeries, RawQuoteRow,
};
pub use regime::{
    compare_windows, summarize_hypothesis, Change, CrisisPreset, HypothesisSummary, SliceMode,
    WindowComparison,
};
pub use scalar::Scalar;
pub use series::{
    descriptive_stats, log_returns, DateWindow, DescriptiveStats, ReturnSeries, Slice,
};

pub type DatedSeries64 = DatedSeries<f64>;
pub type DatedSeries32 = DatedSeries<f32>;
pub type ReturnSeries64 = ReturnSeries<f64>;
pub type ReturnSeries32 = ReturnSeries<f32>;
pub type DescriptiveStats64 = DescriptiveStats<f64>;
pub type EntropyParams64 = EntropyParams<f64>;
pub type EntropyParams32 = EntropyParams<f32>;
pub type EntropyResult64 = EntropyResult<f64>;
pub type EntropyResult32 = EntropyResult<f32>;
pub type WindowComparison64 = WindowComparison<f64>;
