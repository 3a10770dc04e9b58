//! Log returns, moment statistics and date-window slicing.

use std::fmt;
use std::io::Write;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{DatedSeries, Observation};
use crate::scalar::Scalar;

/// Daily log returns `ln(E_t / E_{t-1})`, dated by the later quote.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<T> {
    id: String,
    dates: Vec<NaiveDate>,
    values: Vec<T>,
}

impl<T: Scalar> ReturnSeries<T> {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Plot-ready export: `date,log_return`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["date", "log_return"])?;
        for (d, v) in self.dates.iter().zip(&self.values) {
            w.write_record([d.format("%Y-%m-%d").to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn log_returns<T: Scalar>(series: &DatedSeries<T>) -> Result<ReturnSeries<T>> {
    let obs = series.observations();
    if obs.len() < 2 {
        return Err(Error::InsufficientData {
            context: "log returns",
            needed: 2,
            got: obs.len(),
        });
    }
    let (dates, values) = obs
        .windows(2)
        .map(|w| (w[1].date, (w[1].value / w[0].value).ln()))
        .unzip();
    Ok(ReturnSeries {
        id: series.id().to_owned(),
        dates,
        values,
    })
}

pub fn mean<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &x| acc + x) / T::from_len(values.len())
}

/// Sample standard deviation (n - 1 denominator, two-pass).
pub fn sample_std_dev<T: Scalar>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let mu = mean(values);
    let ss = values.iter().fold(T::zero(), |acc, &x| {
        let d = x - mu;
        acc + d * d
    });
    (ss / T::from_len(n - 1)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats<T> {
    pub n: usize,
    pub mean: T,
    /// Sample standard deviation (n - 1).
    pub std_dev: T,
    /// `m3 / m2^{3/2}` with n-denominator central moments.
    pub skewness: T,
    /// Raw (Pearson) kurtosis `m4 / m2^2`; 3 for a normal distribution.
    pub kurtosis: T,
}

impl<T: Scalar> DescriptiveStats<T> {
    pub fn excess_kurtosis(&self) -> T {
        self.kurtosis - T::lit(3.0)
    }
}

pub fn descriptive_stats<T: Scalar>(values: &[T]) -> Result<DescriptiveStats<T>> {
    let n = values.len();
    if n < 4 {
        return Err(Error::InsufficientData {
            context: "descriptive statistics",
            needed: 4,
            got: n,
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mu = mean(values);
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &x in values {
        let d = x - mu;
        let d2 = d * d;
        m2 = m2 + d2;
        m3 = m3 + d2 * d;
        m4 = m4 + d2 * d2;
    }
    if m2 == T::zero() {
        return Err(Error::DegenerateSeries);
    }
    let nf = T::from_len(n);
    let std_dev = (m2 / T::from_len(n - 1)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    Ok(DescriptiveStats {
        n,
        mean: mu,
        std_dev,
        skewness: m3 / (m2 * m2.sqrt()),
        kurtosis: m4 / (m2 * m2),
    })
}

/// Closed calendar interval `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateWindow {
    pub label: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateWindow {
    pub fn new(label: impl Into<String>, start: NaiveDate, end: NaiveDate) -> Result<Self> {
        let label = label.into();
        if start > end {
            return Err(Error::InvalidWindow { label, start, end });
        }
        Ok(Self { label, start, end })
    }

    /// Whole calendar months, first day of the start month through the last
    /// day of the end month.
    pub fn months(
        label: impl Into<String>,
        (start_year, start_month): (i32, u32),
        (end_year, end_month): (i32, u32),
    ) -> Result<Self> {
        let bad = |y: i32, m: u32| Error::InvalidDate(format!("{y:04}-{m:02}"));
        let start = NaiveDate::from_ymd_opt(start_year, start_month, 1)
            .ok_or_else(|| bad(start_year, start_month))?;
        let end = last_day_of_month(end_year, end_month).ok_or_else(|| bad(end_year, end_month))?;
        Self::new(label, start, end)
    }

    /// Parses `START:END`, each side either `YYYY-MM-DD` or `YYYY-MM`.
    /// A month on the end side expands to that month's last day.
    pub fn parse(label: impl Into<String>, text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidDate(text.to_owned()))?;
        let start = parse_bound(a, false)?;
        let end = parse_bound(b, true)?;
        Self::new(label, start, end)
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

impl fmt::Display for DateWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}..{}", self.label, self.start, self.end)
    }
}

fn last_day_of_month(year: i32, month: u32) -> Option<NaiveDate> {
    let (ny, nm) = if month == 12 {
        (year + 1, 1)
    } else {
        (year, month + 1)
    };
    NaiveDate::from_ymd_opt(ny, nm, 1)?.pred_opt()
}

fn parse_bound(s: &str, end: bool) -> Result<NaiveDate> {
    let s = s.trim();
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d);
    }
    let month = s
        .split_once('-')
        .and_then(|(y, m)| Some((y.parse::<i32>().ok()?, m.parse::<u32>().ok()?)));
    let first = month.and_then(|(y, m)| NaiveDate::from_ymd_opt(y, m, 1));
    match first {
        Some(d) if end => last_day_of_month(d.year(), d.month()),
        Some(d) => Some(d),
        None => None,
    }
    .ok_or_else(|| Error::InvalidDate(s.to_owned()))
}

/// Restriction of a dated sequence to a [`DateWindow`].
pub trait Slice: Sized {
    fn slice(&self, window: &DateWindow) -> Result<Self>;
}

fn window_range(dates: impl Fn(usize) -> NaiveDate, len: usize, w: &DateWindow) -> (usize, usize) {
    // dates are strictly increasing, so binary search both edges
    let lo = partition_point(len, |i| dates(i) < w.start);
    let hi = partition_point(len, |i| dates(i) <= w.end);
    (lo, hi.max(lo))
}

fn partition_point(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

impl<T: Scalar> Slice for ReturnSeries<T> {
    fn slice(&self, window: &DateWindow) -> Result<Self> {
        let (lo, hi) = window_range(|i| self.dates[i], self.dates.len(), window);
        if lo == hi {
            return Err(Error::EmptyWindow(window.label.clone()));
        }
        Ok(ReturnSeries {
            id: self.id.clone(),
            dates: self.dates[lo..hi].to_vec(),
            values: self.values[lo..hi].to_vec(),
        })
    }
}

impl<T: Scalar> Slice for DatedSeries<T> {
    fn slice(&self, window: &DateWindow) -> Result<Self> {
        let obs = self.observations();
        let (lo, hi) = window_range(|i| obs[i].date, obs.len(), window);
        match hi - lo {
            0 => Err(Error::EmptyWindow(window.label.clone())),
            1 => Err(Error::InsufficientData {
                context: "dated series window",
                needed: 2,
                got: 1,
            }),
            _ => Ok(DatedSeries::from_valid(
                self.id().to_owned(),
                obs[lo..hi].to_vec(),
            )),
        }
    }
}

/// Helper for building series in code and tests.
pub fn dated<T: Scalar>(id: &str, points: &[(NaiveDate, T)]) -> Result<DatedSeries<T>> {
    DatedSeries::new(
        id,
        points
            .iter()
            .map(|&(date, value)| Observation { date, value })
            .collect(),
    )
}
