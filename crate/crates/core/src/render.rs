//! Text rendering of result tables.
//!
//! Human-readable formats (markdown, csv) round to a fixed number of
//! decimals; JSON always carries full precision.

use serde::{Deserialize, Serialize};

use crate::regime::WindowComparison;
use crate::scalar::Scalar;

/// Decimals shown for entropy values in csv and markdown.
pub const TABLE_DECIMALS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Markdown,
}

/// A rectangular table of pre-formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing to memory cannot fail
        w.write_record(&self.headers).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 cells")
    }

    pub fn to_markdown(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.headers[c].chars().count(), 3])
                    .max()
                    .unwrap_or(3)
            })
            .collect();
        let line = |cells: &[String]| {
            let body: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            format!("| {} |\n", body.join(" | "))
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

pub fn fixed<T: Scalar>(x: T, decimals: usize) -> String {
    format!("{:.*}", decimals, x.as_f64())
}

/// Serializable view of a comparison row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord<T> {
    pub series: String,
    pub pre: T,
    pub post: T,
    pub change: String,
    pub statistic: String,
    pub preset: String,
    pub m: usize,
    pub pre_r: T,
    pub post_r: T,
    pub pre_n: usize,
    pub post_n: usize,
}

impl<T: Scalar> From<&WindowComparison<T>> for ComparisonRecord<T> {
    fn from(row: &WindowComparison<T>) -> Self {
        Self {
            series: row.series_id.clone(),
            pre: row.pre_value,
            post: row.post_value,
            change: row.change.to_string(),
            statistic: row.statistic.to_string(),
            preset: row.preset.to_string(),
            m: row.pre_params.m,
            pre_r: row.pre_params.r,
            post_r: row.post_params.r,
            pre_n: row.pre_n,
            post_n: row.post_n,
        }
    }
}

pub fn comparison_table<T: Scalar>(rows: &[WindowComparison<T>]) -> Table {
    let mut table = Table::new(["series", "pre", "post", "change"]);
    for r in rows {
        table.push(vec![
            r.series_id.clone(),
            fixed(r.pre_value, TABLE_DECIMALS),
            fixed(r.post_value, TABLE_DECIMALS),
            r.change.to_string(),
        ]);
    }
    table
}

/// Renders homogeneous comparison rows with columns series, pre, post, change.
pub fn render_table<T: Scalar + Serialize>(rows: &[WindowComparison<T>], format: Format) -> String {
    match format {
        Format::Csv => comparison_table(rows).to_csv(),
        Format::Markdown => comparison_table(rows).to_markdown(),
        Format::Json => {
            let records: Vec<ComparisonRecord<T>> = rows.iter().map(Into::into).collect();
            let mut s = serde_json::to_string_pretty(&records).expect("serializable rows");
            s.push('\n');
            s
        }
    }
}
