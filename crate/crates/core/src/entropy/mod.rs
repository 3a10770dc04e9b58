//! Approximate Entropy and Sample Entropy.
//!
//! Both statistics compare every pair of length-`m` templates (runs of `m`
//! consecutive values) under the Chebyshev distance and ask how often pairs
//! that match at length `m` still match at length `m + 1`.
//!
//! * ApEn counts self-matches, takes a logarithm per template and averages.
//!   Length-`p` templates start at indices `0..=N-p`.
//! * SampEn excludes self-matches and takes one logarithm of the aggregate
//!   ratio. Both template lengths start at indices `0..N-m`.
//!
//! Two counting engines are provided. [`Engine::Oracle`] enumerates every
//! ordered pair and evaluates each distance from scratch. [`Engine::Fast`]
//! sorts template start points by their first value, scans only neighbours
//! within `r` of each other, and tests the `m + 1` extension of each
//! length-`m` match with one extra comparison. Both use the same closed
//! predicate `|a - b| <= r` with no epsilon, so their integer counts agree
//! exactly.

mod counting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::sample_std_dev;

pub use counting::{brute_force_counts, sorted_scan_counts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Statistic {
    ApEn,
    SampEn,
}

impl Statistic {
    pub fn convention(self) -> Convention {
        match self {
            Statistic::ApEn => Convention::SelfCounting,
            Statistic::SampEn => Convention::NoSelfCounting,
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistic::ApEn => "ApEn",
            Statistic::SampEn => "SampEn",
        })
    }
}

/// Whether a template is counted as matching itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// ApEn style.
    SelfCounting,
    /// SampEn style.
    NoSelfCounting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    Oracle,
    Fast,
}

/// How the tolerance `r` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Tolerance<T> {
    /// Fixed `r`, in the units of the data.
    Absolute(T),
    /// `r = factor * sample standard deviation` of the analysed values.
    SdFactor(T),
}

/// Requested parameters, before `r` is bound to a concrete input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams<T> {
    pub m: usize,
    pub tolerance: Tolerance<T>,
}

impl<T: Scalar> Default for EntropyParams<T> {
    /// `m = 2`, `r = 0.2 * sd`.
    fn default() -> Self {
        Self {
            m: 2,
            tolerance: Tolerance::SdFactor(T::lit(0.2)),
        }
    }
}

impl<T: Scalar> EntropyParams<T> {
    pub fn absolute(m: usize, r: T) -> Self {
        Self {
            m,
            tolerance: Tolerance::Absolute(r),
        }
    }

    pub fn sd_factor(m: usize, factor: T) -> Self {
        Self {
            m,
            tolerance: Tolerance::SdFactor(factor),
        }
    }

    /// Binds the tolerance to `values`.
    pub fn resolve(&self, values: &[T]) -> Result<ResolvedParams<T>> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let (r, r_factor) = match self.tolerance {
            Tolerance::Absolute(r) => (r, None),
            Tolerance::SdFactor(f) => (tolerance_from_sd(values, f)?, Some(f)),
        };
        if r.is_nan() || r <= T::zero() || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance r must be positive and finite, got {r}"
            )));
        }
        Ok(ResolvedParams {
            m: self.m,
            r,
            r_factor,
        })
    }
}

/// Parameters actually used for one computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams<T> {
    pub m: usize,
    pub r: T,
    pub r_factor: Option<T>,
}

/// Per-template match counts (self-matches included), ApEn only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateCounts {
    /// One entry per length-`m` template, `N - m + 1` entries.
    pub len_m: Vec<u64>,
    /// One entry per length-`m+1` template, `N - m` entries.
    pub len_m_plus_1: Vec<u64>,
}

/// Raw pair counts before normalisation and logarithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounts {
    pub convention: Convention,
    /// Matching ordered pairs at length `m` (SampEn's `B`).
    pub len_m: u64,
    /// Matching ordered pairs at length `m + 1` (SampEn's `A`).
    pub len_m_plus_1: u64,
    pub per_template: Option<TemplateCounts>,
}

impl MatchCounts {
    /// Recombines the counts into the statistic their convention belongs to.
    pub fn entropy<T: Scalar>(&self) -> Result<T> {
        match self.convention {
            Convention::NoSelfCounting => {
                if self.len_m == 0 {
                    return Err(Error::NoTemplateMatches);
                }
                if self.len_m_plus_1 == 0 {
                    return Err(Error::NoExtendedMatches);
                }
                let ratio = T::from_count(self.len_m_plus_1) / T::from_count(self.len_m);
                Ok(clean_zero(-ratio.ln()))
            }
            Convention::SelfCounting => {
                let per = self
                    .per_template
                    .as_ref()
                    .expect("self-counting counts carry per-template detail");
                Ok(clean_zero(
                    phi::<T>(&per.len_m) - phi::<T>(&per.len_m_plus_1),
                ))
            }
        }
    }
}

/// Average over templates of `ln(count_i / n_templates)`.
fn phi<T: Scalar>(counts: &[u64]) -> T {
    let n = T::from_len(counts.len());
    let sum = counts
        .iter()
        .fold(T::zero(), |acc, &c| acc + (T::from_count(c) / n).ln());
    sum / n
}

// -0.0 from -ln(1) prints badly
fn clean_zero<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult<T> {
    pub kind: Statistic,
    pub value: T,
    pub params: ResolvedParams<T>,
    pub n: usize,
    pub counts: MatchCounts,
    pub engine: Engine,
}

/// `max_k |a[k] - b[k]|`.
///
/// Panics if the slices differ in length or are empty.
pub fn chebyshev_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "chebyshev_distance: length mismatch");
    assert!(!a.is_empty(), "chebyshev_distance: empty vectors");
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// `r_factor * sample sd(values)`.
pub fn tolerance_from_sd<T: Scalar>(values: &[T], r_factor: T) -> Result<T> {
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            context: "tolerance from standard deviation",
            needed: 2,
            got: values.len(),
        });
    }
    if r_factor.is_nan() || r_factor <= T::zero() || !r_factor.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "r factor must be positive and finite, got {r_factor}"
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let sd = sample_std_dev(values);
    if sd == T::zero() {
        return Err(Error::DegenerateTolerance);
    }
    Ok(r_factor * sd)
}

fn check_input<T: Scalar>(values: &[T], params: &EntropyParams<T>) -> Result<ResolvedParams<T>> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if params.m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if values.len() < params.m + 2 {
        return Err(Error::InsufficientData {
            context: "entropy (N >= m + 2)",
            needed: params.m + 2,
            got: values.len(),
        });
    }
    params.resolve(values)
}

/// Counts template matches on the fast path.
pub fn match_counts<T: Scalar>(
    values: &[T],
    params: &EntropyParams<T>,
    convention: Convention,
) -> Result<MatchCounts> {
    let p = check_input(values, params)?;
    let counts = sorted_scan_counts(values, p.m, p.r, convention);
    if convention == Convention::NoSelfCounting && counts.len_m == 0 {
        return Err(Error::NoTemplateMatches);
    }
    Ok(counts)
}

fn compute<T: Scalar>(
    values: &[T],
    params: &EntropyParams<T>,
    kind: Statistic,
    engine: Engine,
) -> Result<EntropyResult<T>> {
    let p = check_input(values, params)?;
    let counts = match engine {
        Engine::Oracle => brute_force_counts(values, p.m, p.r, kind.convention()),
        Engine::Fast => sorted_scan_counts(values, p.m, p.r, kind.convention()),
    };
    let value = counts.entropy()?;
    Ok(EntropyResult {
        kind,
        value,
        params: p,
        n: values.len(),
        counts,
        engine,
    })
}

/// Approximate Entropy, exhaustive pair enumeration.
pub fn apen<T: Scalar>(values: &[T], params: &EntropyParams<T>) -> Result<EntropyResult<T>> {
    compute(values, params, Statistic::ApEn, Engine::Oracle)
}

/// Approximate Entropy on the sorted-scan engine.
pub fn fast_apen<T: Scalar>(values: &[T], params: &EntropyParams<T>) -> Result<EntropyResult<T>> {
    compute(values, params, Statistic::ApEn, Engine::Fast)
}

/// Sample Entropy, exhaustive pair enumeration.
pub fn sampen<T: Scalar>(values: &[T], params: &EntropyParams<T>) -> Result<EntropyResult<T>> {
    compute(values, params, Statistic::SampEn, Engine::Oracle)
}

/// Sample Entropy on the sorted-scan engine. Identical counts to [`sampen`].
pub fn fast_sampen<T: Scalar>(values: &[T], params: &EntropyParams<T>) -> Result<EntropyResult<T>> {
    compute(values, params, Statistic::SampEn, Engine::Fast)
}

/// Either statistic on the fast engine.
pub fn entropy<T: Scalar>(
    values: &[T],
    params: &EntropyParams<T>,
    statistic: Statistic,
) -> Result<EntropyResult<T>> {
    compute(values, params, statistic, Engine::Fast)
}
