//! Reading daily quote exports into validated, chronologically ordered series.
//!
//! Input is delimiter-separated text with a header row. The date and price
//! columns are located by name (default `Date` / `Price`, as in investing.com
//! exports) or by zero-based index. Extra columns are ignored.

use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Accepted calendar date layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DateFormat {
    /// `YYYY-MM-DD`
    #[default]
    Iso,
    /// `MM/DD/YYYY`
    Us,
}

impl DateFormat {
    pub fn pattern(self) -> &'static str {
        match self {
            DateFormat::Iso => "%Y-%m-%d",
            DateFormat::Us => "%m/%d/%Y",
        }
    }

    pub fn parse(self, s: &str) -> Option<NaiveDate> {
        NaiveDate::parse_from_str(s.trim(), self.pattern()).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    fn resolve(&self, headers: &csv::StringRecord) -> Result<usize> {
        match self {
            ColumnRef::Index(i) if *i < headers.len() => Ok(*i),
            ColumnRef::Index(i) => Err(Error::MissingColumn(format!("#{i}"))),
            ColumnRef::Name(name) => headers
                .iter()
                .position(|h| h.trim_start_matches('\u{feff}').trim() == name)
                .ok_or_else(|| Error::MissingColumn(name.clone())),
        }
    }
}

/// Column layout of an input file.
#[derive(Debug, Clone)]
pub struct CsvConfig {
    pub delimiter: u8,
    pub date_column: ColumnRef,
    pub price_column: ColumnRef,
    pub date_format: DateFormat,
}

impl Default for CsvConfig {
    fn default() -> Self {
        Self {
            delimiter: b',',
            date_column: ColumnRef::Name("Date".into()),
            price_column: ColumnRef::Name("Price".into()),
            date_format: DateFormat::Iso,
        }
    }
}

/// One data line of an input file, before ordering and deduplication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawQuoteRow<T> {
    /// 1-based line number in the source text.
    pub line: u64,
    pub date: NaiveDate,
    pub price: T,
}

/// Parses a numeric cell, stripping surrounding quotes, whitespace and
/// thousands separators. Returns `None` for anything unparseable.
pub fn parse_price<T: Scalar>(cell: &str) -> Option<T> {
    let cleaned: String = cell
        .trim()
        .trim_matches('"')
        .chars()
        .filter(|c| *c != ',' && !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return None;
    }
    cleaned.parse::<T>().ok()
}

/// Parses every data line into a [`RawQuoteRow`], keeping file order.
pub fn parse_csv<T: Scalar, R: Read>(reader: R, config: &CsvConfig) -> Result<Vec<RawQuoteRow<T>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    let date_idx = config.date_column.resolve(&headers)?;
    let price_idx = config.price_column.resolve(&headers)?;

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize, what: &str| {
            record.get(idx).ok_or_else(|| Error::InvalidRow {
                line,
                message: format!("missing {what} field"),
            })
        };

        let date_cell = field(date_idx, "date")?;
        let date = config
            .date_format
            .parse(date_cell)
            .ok_or_else(|| Error::InvalidRow {
                line,
                message: format!("unparseable date `{date_cell}`"),
            })?;

        let price_cell = field(price_idx, "price")?;
        let price: T = parse_price(price_cell).ok_or_else(|| Error::InvalidRow {
            line,
            message: format!("unparseable price `{price_cell}`"),
        })?;
        if !price.is_finite() || price <= T::zero() {
            return Err(Error::InvalidRow {
                line,
                message: format!("price must be positive and finite, got `{price_cell}`"),
            });
        }

        rows.push(RawQuoteRow { line, date, price });
    }
    Ok(rows)
}

pub fn parse_csv_str<T: Scalar>(text: &str, config: &CsvConfig) -> Result<Vec<RawQuoteRow<T>>> {
    parse_csv(text.as_bytes(), config)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation<T> {
    pub date: NaiveDate,
    pub value: T,
}

/// Quotes of one exchange rate: strictly increasing dates, positive finite
/// values, at least two observations.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedSeries<T> {
    id: String,
    observations: Vec<Observation<T>>,
}

impl<T: Scalar> DatedSeries<T> {
    /// Builds a series, checking every invariant.
    pub fn new(id: impl Into<String>, observations: Vec<Observation<T>>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::InsufficientData {
                context: "dated series",
                needed: 2,
                got: observations.len(),
            });
        }
        for (i, o) in observations.iter().enumerate() {
            if !o.value.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if o.value <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "quote on {} is not positive",
                    o.date
                )));
            }
        }
        if let Some(w) = observations.windows(2).find(|w| w[0].date >= w[1].date) {
            return Err(Error::InvalidParameter(format!(
                "dates not strictly increasing at {}",
                w[1].date
            )));
        }
        Ok(Self {
            id: id.into(),
            observations,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn observations(&self) -> &[Observation<T>] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn values(&self) -> Vec<T> {
        self.observations.iter().map(|o| o.value).collect()
    }

    /// Rows equivalent to this series, as if read back from a file.
    pub fn to_rows(&self) -> Vec<RawQuoteRow<T>> {
        self.observations
            .iter()
            .zip(2u64..)
            .map(|(o, line)| RawQuoteRow {
                line,
                date: o.date,
                price: o.value,
            })
            .collect()
    }

    /// Canonical two-column export: `date,value` with ISO dates and
    /// shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["date", "value"])?;
        for o in &self.observations {
            w.write_record([o.date.format("%Y-%m-%d").to_string(), o.value.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Internal constructor for subsets of an already valid series.
    pub(crate) fn from_valid(id: String, observations: Vec<Observation<T>>) -> Self {
        Self { id, observations }
    }
}

/// Sorts rows ascending by date, drops exact duplicates (first occurrence
/// wins) and rejects contradictory duplicates.
pub fn normalize<T: Scalar>(
    rows: &[RawQuoteRow<T>],
    id: impl Into<String>,
) -> Result<DatedSeries<T>> {
    let mut sorted: Vec<&RawQuoteRow<T>> = rows.iter().collect();
    // stable: duplicates stay in file order
    sorted.sort_by_key(|r| r.date);

    let mut observations: Vec<Observation<T>> = Vec::with_capacity(sorted.len());
    for row in sorted {
        match observations.last() {
            Some(prev) if prev.date == row.date => {
                if prev.value != row.price {
                    return Err(Error::DateConflict {
                        date: row.date,
                        first: prev.value.as_f64(),
                        second: row.price.as_f64(),
                    });
                }
            }
            _ => observations.push(Observation {
                date: row.date,
                value: row.price,
            }),
        }
    }
    DatedSeries::new(id, observations)
}

/// Reads and normalizes a file in one step.
pub fn load_series<T: Scalar, R: Read>(
    reader: R,
    config: &CsvConfig,
    id: impl Into<String>,
) -> Result<DatedSeries<T>> {
    let rows = parse_csv(reader, config)?;
    normalize(&rows, id)
}
