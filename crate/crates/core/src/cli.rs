//! Batch command-line front end.
//!
//! Every command reads one or more quote files (`--input PATH=LABEL`), works
//! on their daily log returns and prints a table to stdout. Exit status is 0
//! on success, 1 on data or computation errors and 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{entropy, EntropyParams, Statistic, Tolerance};
use crate::error::Error;
use crate::ingest::{load_series, ColumnRef, CsvConfig, DateFormat, DatedSeries};
use crate::regime::{compare_price_windows, summarize_hypothesis, CrisisPreset, SliceMode};
use crate::render::{comparison_table, fixed, render_table, Format, Table, TABLE_DECIMALS};
use crate::series::{descriptive_stats, log_returns, DateWindow, ReturnSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Decimals for the descriptive statistics table; returns are O(1e-4).
const STATS_DECIMALS: usize = 5;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "fxentropy",
    version,
    about = "Entropy-based regularity analysis of exchange-rate returns"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and re-export quotes as canonical `date,value` CSV.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Daily log returns.
    Returns {
        #[command(flatten)]
        input: InputArgs,
        /// Two-column `date,log_return` CSV for plotting (single input).
        #[arg(long)]
        emit_plot_data: bool,
    },
    /// Mean, standard deviation, kurtosis and skewness of log returns.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Report kurtosis minus 3.
        #[arg(long)]
        excess_kurtosis: bool,
    },
    /// ApEn / SampEn of each full return series.
    Entropy {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        entropy: EntropyArgs,
    },
    /// Entropy before and after a crisis, per series.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        entropy: EntropyArgs,
        #[command(flatten)]
        windows: WindowArgs,
        #[arg(long, value_enum, default_value = "returns-then-slice")]
        slice_mode: SliceModeArg,
    },
}

#[derive(Debug, Clone)]
pub struct InputSpec {
    pub path: PathBuf,
    pub label: String,
}

fn parse_input(s: &str) -> Result<InputSpec, String> {
    match s.rsplit_once('=') {
        Some((path, label)) if !path.is_empty() && !label.is_empty() => Ok(InputSpec {
            path: path.into(),
            label: label.into(),
        }),
        Some(_) => Err(format!("expected PATH=LABEL, got `{s}`")),
        None => {
            let path = PathBuf::from(s);
            let label = path
                .file_stem()
                .map(|x| x.to_string_lossy().into_owned())
                .ok_or_else(|| format!("cannot derive a label from `{s}`"))?;
            Ok(InputSpec { path, label })
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Quote file, optionally labelled: PATH=LABEL. Repeatable.
    #[arg(long = "input", value_name = "PATH=LABEL", required = true, value_parser = parse_input)]
    pub inputs: Vec<InputSpec>,
    #[arg(long, value_enum, default_value = "iso")]
    pub date_format: DateFormatArg,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long, default_value = "Date")]
    pub date_column: String,
    #[arg(long, default_value = "Price")]
    pub price_column: String,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub stat: StatArg,
    /// Template length.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Absolute tolerance in return units.
    #[arg(long, conflicts_with = "r_factor")]
    pub r: Option<f64>,
    /// Tolerance as a multiple of each window's sample sd (default 0.2).
    #[arg(long)]
    pub r_factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, value_enum, conflicts_with_all = ["pre", "post"])]
    pub preset: Option<PresetArg>,
    /// Pre window START:END (YYYY-MM-DD or YYYY-MM).
    #[arg(long, requires = "post")]
    pub pre: Option<String>,
    /// Post window START:END.
    #[arg(long, requires = "pre")]
    pub post: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DateFormatArg {
    Iso,
    Us,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Apen,
    Sampen,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    Gfc,
    Covid19,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SliceModeArg {
    ReturnsThenSlice,
    SliceThenReturns,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

impl StatArg {
    fn statistics(self) -> Vec<Statistic> {
        match self {
            StatArg::Apen => vec![Statistic::ApEn],
            StatArg::Sampen => vec![Statistic::SampEn],
            StatArg::Both => vec![Statistic::ApEn, Statistic::SampEn],
        }
    }
}

impl EntropyArgs {
    fn params(&self) -> Result<EntropyParams<f64>, CliError> {
        if self.m == 0 {
            return Err(CliError::Usage("--m must be at least 1".into()));
        }
        let tolerance = match (self.r, self.r_factor) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--r and --r-factor are exclusive".into()))
            }
            (Some(r), None) if r > 0.0 && r.is_finite() => Tolerance::Absolute(r),
            (Some(r), None) => {
                return Err(CliError::Usage(format!("--r must be positive, got {r}")))
            }
            (None, Some(f)) if f > 0.0 && f.is_finite() => Tolerance::SdFactor(f),
            (None, Some(f)) => {
                return Err(CliError::Usage(format!(
                    "--r-factor must be positive, got {f}"
                )))
            }
            (None, None) => Tolerance::SdFactor(0.2),
        };
        Ok(EntropyParams {
            m: self.m,
            tolerance,
        })
    }
}

impl WindowArgs {
    fn preset(&self) -> Result<CrisisPreset, CliError> {
        match (self.preset, &self.pre, &self.post) {
            (Some(PresetArg::Gfc), None, None) => Ok(CrisisPreset::gfc()),
            (Some(PresetArg::Covid19), None, None) => Ok(CrisisPreset::covid19()),
            (None, Some(pre), Some(post)) => {
                let pre =
                    DateWindow::parse("pre", pre).map_err(|e| CliError::Usage(e.to_string()))?;
                let post =
                    DateWindow::parse("post", post).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(CrisisPreset::custom(pre, post))
            }
            _ => Err(CliError::Usage(
                "compare needs either --preset or both --pre and --post".into(),
            )),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

fn data(e: Error) -> CliError {
    CliError::Data(e.to_string())
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&config) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.to_string().replace('\n', " ")),
        },
    }
}

pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    match &config.command {
        Command::Ingest { input } => {
            let series = load_all(input)?;
            render_points(&series, input.format.into(), "value", |s| {
                s.observations().iter().map(|o| (o.date, o.value)).collect()
            })
        }
        Command::Returns {
            input,
            emit_plot_data,
        } => {
            let returns = all_returns(&load_all(input)?)?;
            if *emit_plot_data {
                if returns.len() != 1 {
                    return Err(CliError::Usage(
                        "--emit-plot-data takes exactly one --input".into(),
                    ));
                }
                let mut out = Vec::new();
                returns[0].write_csv(&mut out).map_err(data)?;
                return Ok(String::from_utf8(out).expect("utf8 csv"));
            }
            render_points(&returns, input.format.into(), "log_return", |r| {
                r.dates()
                    .iter()
                    .copied()
                    .zip(r.values().iter().copied())
                    .collect()
            })
        }
        Command::Stats {
            input,
            excess_kurtosis,
        } => stats(input, *excess_kurtosis),
        Command::Entropy { input, entropy } => full_entropy(input, entropy),
        Command::Compare {
            input,
            entropy,
            windows,
            slice_mode,
        } => compare(input, entropy, windows, *slice_mode),
    }
}

fn csv_config(input: &InputArgs) -> Result<CsvConfig, CliError> {
    if !input.delimiter.is_ascii() {
        return Err(CliError::Usage(
            "--delimiter must be a single ASCII character".into(),
        ));
    }
    Ok(CsvConfig {
        delimiter: input.delimiter as u8,
        date_column: ColumnRef::Name(input.date_column.clone()),
        price_column: ColumnRef::Name(input.price_column.clone()),
        date_format: match input.date_format {
            DateFormatArg::Iso => DateFormat::Iso,
            DateFormatArg::Us => DateFormat::Us,
        },
    })
}

fn load_one(path: &Path, label: &str, config: &CsvConfig) -> Result<DatedSeries<f64>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("{label}: cannot open {}: {e}", path.display())))?;
    load_series(BufReader::new(file), config, label)
        .map_err(|e| CliError::Data(format!("{label}: {e}")))
}

/// Loads every input in parallel; results sorted by label.
fn load_all(input: &InputArgs) -> Result<Vec<DatedSeries<f64>>, CliError> {
    let config = csv_config(input)?;
    let mut labels: Vec<&str> = input.inputs.iter().map(|i| i.label.as_str()).collect();
    labels.sort_unstable();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("duplicate input label `{}`", w[0])));
    }
    let loaded: Vec<_> = input
        .inputs
        .par_iter()
        .map(|i| load_one(&i.path, &i.label, &config))
        .collect();
    let mut series = loaded.into_iter().collect::<Result<Vec<_>, _>>()?;
    series.sort_by(|a, b| a.id().cmp(b.id()));
    Ok(series)
}

fn all_returns(series: &[DatedSeries<f64>]) -> Result<Vec<ReturnSeries<f64>>, CliError> {
    series
        .iter()
        .map(|s| log_returns(s).map_err(|e| CliError::Data(format!("{}: {e}", s.id()))))
        .collect()
}

#[derive(Serialize)]
struct PointRecord<'a> {
    series: &'a str,
    date: String,
    value: f64,
}

fn render_points<S>(
    items: &[S],
    format: Format,
    value_name: &str,
    points: impl Fn(&S) -> Vec<(chrono::NaiveDate, f64)>,
) -> Result<String, CliError>
where
    S: HasId,
{
    let single = items.len() == 1;
    match format {
        Format::Json => {
            let mut records = Vec::new();
            for item in items {
                for (d, v) in points(item) {
                    records.push(PointRecord {
                        series: item.label(),
                        date: d.to_string(),
                        value: v,
                    });
                }
            }
            Ok(json(&records))
        }
        Format::Csv | Format::Markdown => {
            let mut table = if single && format == Format::Csv {
                Table::new(["date", value_name])
            } else {
                Table::new(["series", "date", value_name])
            };
            for item in items {
                for (d, v) in points(item) {
                    let mut row = vec![d.to_string(), v.to_string()];
                    if table.headers.len() == 3 {
                        row.insert(0, item.label().to_owned());
                    }
                    table.push(row);
                }
            }
            Ok(match format {
                Format::Csv => table.to_csv(),
                _ => table.to_markdown(),
            })
        }
    }
}

trait HasId {
    fn label(&self) -> &str;
}

impl HasId for DatedSeries<f64> {
    fn label(&self) -> &str {
        self.id()
    }
}

impl HasId for ReturnSeries<f64> {
    fn label(&self) -> &str {
        self.id()
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct StatsRecord<'a> {
    series: &'a str,
    n: usize,
    mean: f64,
    std_dev: f64,
    kurtosis: f64,
    kurtosis_convention: &'static str,
    skewness: f64,
}

fn stats(input: &InputArgs, excess: bool) -> Result<String, CliError> {
    let returns = all_returns(&load_all(input)?)?;
    let mut records = Vec::new();
    for r in &returns {
        let s = descriptive_stats(r.values())
            .map_err(|e| CliError::Data(format!("{}: {e}", r.id())))?;
        records.push(StatsRecord {
            series: r.id(),
            n: s.n,
            mean: s.mean,
            std_dev: s.std_dev,
            kurtosis: if excess {
                s.excess_kurtosis()
            } else {
                s.kurtosis
            },
            kurtosis_convention: if excess { "excess" } else { "raw" },
            skewness: s.skewness,
        });
    }
    let format: Format = input.format.into();
    if format == Format::Json {
        return Ok(json(&records));
    }
    let kurt = if excess {
        "excess_kurtosis"
    } else {
        "kurtosis"
    };
    let mut table = Table::new(["series", "n", "mean", "std_dev", kurt, "skewness"]);
    for r in &records {
        table.push(vec![
            r.series.to_owned(),
            r.n.to_string(),
            fixed(r.mean, STATS_DECIMALS),
            fixed(r.std_dev, STATS_DECIMALS),
            fixed(r.kurtosis, STATS_DECIMALS),
            fixed(r.skewness, STATS_DECIMALS),
        ]);
    }
    Ok(if format == Format::Csv {
        table.to_csv()
    } else {
        table.to_markdown()
    })
}

#[derive(Serialize)]
struct EntropyRecord {
    series: String,
    statistic: String,
    m: usize,
    r: f64,
    r_factor: Option<f64>,
    n: usize,
    value: f64,
    len_m_matches: u64,
    len_m_plus_1_matches: u64,
}

fn full_entropy(input: &InputArgs, args: &EntropyArgs) -> Result<String, CliError> {
    let params = args.params()?;
    let returns = all_returns(&load_all(input)?)?;
    let tasks: Vec<(&ReturnSeries<f64>, Statistic)> = returns
        .iter()
        .flat_map(|r| args.stat.statistics().into_iter().map(move |s| (r, s)))
        .collect();
    let results: Vec<_> = tasks
        .par_iter()
        .map(|&(r, stat)| {
            entropy(r.values(), &params, stat)
                .map(|res| EntropyRecord {
                    series: r.id().to_owned(),
                    statistic: stat.to_string(),
                    m: res.params.m,
                    r: res.params.r,
                    r_factor: res.params.r_factor,
                    n: res.n,
                    value: res.value,
                    len_m_matches: res.counts.len_m,
                    len_m_plus_1_matches: res.counts.len_m_plus_1,
                })
                .map_err(|e| CliError::Data(format!("{} [{stat}]: {e}", r.id())))
        })
        .collect();
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let format: Format = input.format.into();
    if format == Format::Json {
        return Ok(json(&records));
    }
    let mut table = Table::new([
        "series",
        "statistic",
        "m",
        "r",
        "n",
        "value",
        "matches_m",
        "matches_m1",
    ]);
    for r in &records {
        table.push(vec![
            r.series.clone(),
            r.statistic.clone(),
            r.m.to_string(),
            format!("{:.6e}", r.r),
            r.n.to_string(),
            fixed(r.value, TABLE_DECIMALS),
            r.len_m_matches.to_string(),
            r.len_m_plus_1_matches.to_string(),
        ]);
    }
    Ok(if format == Format::Csv {
        table.to_csv()
    } else {
        table.to_markdown()
    })
}

#[derive(Serialize)]
struct ComparisonBlock {
    statistic: Statistic,
    preset: String,
    pre_window: DateWindow,
    post_window: DateWindow,
    rows: Vec<crate::render::ComparisonRecord<f64>>,
    summary: crate::regime::HypothesisSummary,
}

fn compare(
    input: &InputArgs,
    args: &EntropyArgs,
    windows: &WindowArgs,
    slice_mode: SliceModeArg,
) -> Result<String, CliError> {
    let params = args.params()?;
    let preset = windows.preset()?;
    let mode = match slice_mode {
        SliceModeArg::ReturnsThenSlice => SliceMode::ReturnsThenSlice,
        SliceModeArg::SliceThenReturns => SliceMode::SliceThenReturns,
    };
    let series = load_all(input)?;
    let statistics = args.stat.statistics();

    // (statistic, series) order: one table per statistic, rows by series id
    let tasks: Vec<(Statistic, &DatedSeries<f64>)> = statistics
        .iter()
        .flat_map(|&st| series.iter().map(move |s| (st, s)))
        .collect();
    let results: Vec<_> = tasks
        .par_iter()
        .map(|&(st, s)| compare_price_windows(s, &preset, st, &params, mode).map_err(data))
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let format: Format = input.format.into();
    let mut blocks = Vec::new();
    for &st in &statistics {
        let group: Vec<_> = rows.iter().filter(|r| r.statistic == st).cloned().collect();
        let summary = summarize_hypothesis(&group, st).map_err(data)?;
        blocks.push((st, group, summary));
    }

    Ok(match format {
        Format::Json => {
            let out: Vec<ComparisonBlock> = blocks
                .iter()
                .map(|(st, group, summary)| ComparisonBlock {
                    statistic: *st,
                    preset: preset.name.to_string(),
                    pre_window: preset.pre.clone(),
                    post_window: preset.post.clone(),
                    rows: group.iter().map(Into::into).collect(),
                    summary: *summary,
                })
                .collect();
            json(&out)
        }
        Format::Csv => blocks
            .iter()
            .map(|(_, group, _)| render_table(group, Format::Csv))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Markdown => {
            blocks
                .iter()
                .map(|(st, group, summary)| {
                    format!(
                    "### {st} {}: {} vs {}\n\n{}\n{st}: {} of {} decreased; strict majority: {}\n",
                    preset.name,
                    preset.pre,
                    preset.post,
                    comparison_table(group).to_markdown(),
                    summary.decreases,
                    summary.total,
                    if summary.supports_hypothesis { "yes" } else { "no" },
                )
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
    })
}
