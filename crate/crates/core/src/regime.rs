//! Pre/post crisis entropy comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::{entropy, EntropyParams, ResolvedParams, Statistic};
use crate::error::{Error, Result};
use crate::ingest::DatedSeries;
use crate::scalar::Scalar;
use crate::series::{log_returns, DateWindow, ReturnSeries, Slice};

/// Differences within this band count as no change.
pub const TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PresetName {
    Gfc,
    Covid19,
    Custom,
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetName::Gfc => "gfc",
            PresetName::Covid19 => "covid19",
            PresetName::Custom => "custom",
        })
    }
}

/// A before/after pair of analysis windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrisisPreset {
    pub name: PresetName,
    pub pre: DateWindow,
    pub post: DateWindow,
}

impl CrisisPreset {
    /// May 2006 - Sep 2007 against Oct 2007 - Feb 2009.
    pub fn gfc() -> Self {
        Self {
            name: PresetName::Gfc,
            pre: DateWindow::months("pre-gfc", (2006, 5), (2007, 9)).expect("valid preset"),
            post: DateWindow::months("post-gfc", (2007, 10), (2009, 2)).expect("valid preset"),
        }
    }

    /// Jan 2018 - Dec 2019 against Jan 2020 - Dec 2021.
    pub fn covid19() -> Self {
        Self {
            name: PresetName::Covid19,
            pre: DateWindow::months("pre-covid19", (2018, 1), (2019, 12)).expect("valid preset"),
            post: DateWindow::months("post-covid19", (2020, 1), (2021, 12)).expect("valid preset"),
        }
    }

    pub fn custom(pre: DateWindow, post: DateWindow) -> Self {
        Self {
            name: PresetName::Custom,
            pre,
            post,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Change {
    Decrease,
    Increase,
    Unchanged,
}

impl Change {
    pub fn classify<T: Scalar>(pre: T, post: T) -> Self {
        let eps = T::lit(TIE_EPSILON);
        if post < pre - eps {
            Change::Decrease
        } else if post > pre + eps {
            Change::Increase
        } else {
            Change::Unchanged
        }
    }
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Change::Decrease => "Decrease",
            Change::Increase => "Increase",
            Change::Unchanged => "Unchanged",
        })
    }
}

/// Where window boundaries are applied relative to the return computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SliceMode {
    /// Returns over the whole series, then restricted to each window.
    #[default]
    ReturnsThenSlice,
    /// Prices restricted to each window, then differenced. Drops the return
    /// that straddles the window start.
    SliceThenReturns,
}

/// One row of a before/after table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowComparison<T> {
    pub series_id: String,
    pub statistic: Statistic,
    pub preset: PresetName,
    pub pre_value: T,
    pub post_value: T,
    pub change: Change,
    pub pre_params: ResolvedParams<T>,
    pub post_params: ResolvedParams<T>,
    pub pre_n: usize,
    pub post_n: usize,
}

/// Entropy of each window of an already computed return series.
///
/// With an sd-factor tolerance, `r` is re-derived from each window's own
/// returns.
pub fn compare_windows<T: Scalar>(
    returns: &ReturnSeries<T>,
    preset: &CrisisPreset,
    statistic: Statistic,
    params: &EntropyParams<T>,
) -> Result<WindowComparison<T>> {
    let window_values = |w: &DateWindow| {
        returns
            .slice(w)
            .map(|s| s.values().to_vec())
            .map_err(|e| e.in_window(returns.id(), &w.label))
    };
    let pre = window_values(&preset.pre)?;
    let post = window_values(&preset.post)?;
    compare_values(returns.id(), &pre, &post, preset, statistic, params)
}

/// Same as [`compare_windows`] starting from prices, honouring `mode`.
pub fn compare_price_windows<T: Scalar>(
    prices: &DatedSeries<T>,
    preset: &CrisisPreset,
    statistic: Statistic,
    params: &EntropyParams<T>,
    mode: SliceMode,
) -> Result<WindowComparison<T>> {
    match mode {
        SliceMode::ReturnsThenSlice => {
            compare_windows(&log_returns(prices)?, preset, statistic, params)
        }
        SliceMode::SliceThenReturns => {
            let window_values = |w: &DateWindow| {
                prices
                    .slice(w)
                    .and_then(|s| log_returns(&s))
                    .map(|r| r.values().to_vec())
                    .map_err(|e| e.in_window(prices.id(), &w.label))
            };
            let pre = window_values(&preset.pre)?;
            let post = window_values(&preset.post)?;
            compare_values(prices.id(), &pre, &post, preset, statistic, params)
        }
    }
}

fn compare_values<T: Scalar>(
    id: &str,
    pre: &[T],
    post: &[T],
    preset: &CrisisPreset,
    statistic: Statistic,
    params: &EntropyParams<T>,
) -> Result<WindowComparison<T>> {
    let pre_res =
        entropy(pre, params, statistic).map_err(|e| e.in_window(id, &preset.pre.label))?;
    let post_res =
        entropy(post, params, statistic).map_err(|e| e.in_window(id, &preset.post.label))?;
    Ok(WindowComparison {
        series_id: id.to_owned(),
        statistic,
        preset: preset.name,
        pre_value: pre_res.value,
        post_value: post_res.value,
        change: Change::classify(pre_res.value, post_res.value),
        pre_params: pre_res.params,
        post_params: post_res.params,
        pre_n: pre.len(),
        post_n: post.len(),
    })
}

/// How many rows moved in the hypothesised direction (entropy down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisSummary {
    pub statistic: Statistic,
    pub decreases: usize,
    pub total: usize,
    /// Strict majority of rows decreased.
    pub supports_hypothesis: bool,
}

pub fn summarize_hypothesis<T>(
    rows: &[WindowComparison<T>],
    statistic: Statistic,
) -> Result<HypothesisSummary> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter(
            "no comparison rows to summarize".into(),
        ));
    }
    if let Some(bad) = rows.iter().find(|r| r.statistic != statistic) {
        return Err(Error::StatisticMismatch {
            expected: statistic.to_string(),
            found: bad.statistic.to_string(),
        });
    }
    let decreases = rows.iter().filter(|r| r.change == Change::Decrease).count();
    let total = rows.len();
    Ok(HypothesisSummary {
        statistic,
        decreases,
        total,
        supports_hypothesis: 2 * decreases > total,
    })
}
