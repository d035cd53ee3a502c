//! Thin command-line front end over the freqgc library.
//!
//! Exit codes: 0 success, 1 input/configuration error, 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use freqgc::config::{Direction, LagTruncation, SpectralConfig};
use freqgc::error::Error;
use freqgc::pipeline::{self, InputFile, UnitRootPanel};
use freqgc::series::{load_csv, CsvSpec, DateFormat};
use freqgc::stationarity;
use freqgc::synthetic::TransferGenerator;

#[derive(Parser)]
#[command(name = "freqgc", version, about = "Frequency-domain Granger causality testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ADF and Phillips-Perron unit-root tests for one CSV column.
    Unitroot(UnitrootArgs),
    /// Full pipeline: unit roots, prewhitening, Granger coherence, bands.
    Test(TestArgs),
    /// Monte Carlo size/power study on a synthetic lagged-transfer pair.
    Mc(McArgs),
}

#[derive(Args)]
struct CsvArgs {
    /// Date column name.
    #[arg(long, default_value = "date")]
    date_col: String,
    /// Date encoding: auto, year-month, compact, or year-month-day.
    #[arg(long, default_value = "auto")]
    date_format: String,
    /// Trim leading/trailing sentinel values (-99.99, -999) instead of erroring.
    #[arg(long)]
    na_drop: bool,
}

#[derive(Args)]
struct UnitrootArgs {
    /// Input CSV file.
    #[arg(long)]
    file: PathBuf,
    /// Series column name.
    #[arg(long)]
    col: String,
    #[command(flatten)]
    csv: CsvArgs,
    /// Maximum ADF lag; default floor(12 (T/100)^(1/4)).
    #[arg(long)]
    max_lag: Option<usize>,
}

#[derive(Args)]
struct TestArgs {
    /// CSV file holding the candidate cause x.
    #[arg(long)]
    x: PathBuf,
    /// Column name of x.
    #[arg(long)]
    xcol: String,
    /// CSV file holding the candidate effect y.
    #[arg(long)]
    y: PathBuf,
    /// Column name of y.
    #[arg(long)]
    ycol: String,
    #[command(flatten)]
    csv: CsvArgs,
    /// Direction to test: x-to-y, y-to-x, or both.
    #[arg(long, default_value = "x-to-y")]
    direction: String,
    /// Significance level of the pointwise tests.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bartlett truncation lag: 'auto' (round(sqrt(T))) or an integer.
    #[arg(long, default_value = "auto")]
    m: String,
    /// Number of interior grid frequencies.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Long-term/short-term boundary frequency.
    #[arg(long, default_value_t = 0.52)]
    band_split: f64,
    /// Fix the ARMA order of x as 'p,q' instead of BIC selection.
    #[arg(long)]
    arma_x: Option<String>,
    /// Fix the ARMA order of y as 'p,q' instead of BIC selection.
    #[arg(long)]
    arma_y: Option<String>,
    /// Skip the SVG plot.
    #[arg(long)]
    no_svg: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct McArgs {
    /// Transfer coefficients on lags 1..J, comma separated; empty = null generator.
    #[arg(long, default_value = "")]
    b: String,
    #[arg(long, default_value_t = 1.0)]
    cause_std: f64,
    #[arg(long, default_value_t = 1.0)]
    noise_std: f64,
    /// Series length per replication.
    #[arg(long, default_value_t = 600)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bartlett truncation lag: 'auto' or an integer.
    #[arg(long, default_value = "auto")]
    m: String,
    /// Number of probe frequencies.
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// Route each replication through automatic ARMA prewhitening.
    #[arg(long)]
    prewhiten: bool,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_truncation(s: &str) -> Result<LagTruncation, Error> {
    if s == "auto" {
        Ok(LagTruncation::Auto)
    } else {
        s.parse::<usize>()
            .map(LagTruncation::Fixed)
            .map_err(|_| Error::InvalidConfig(format!("invalid truncation lag '{s}'")))
    }
}

fn parse_order(s: &str) -> Result<(usize, usize), Error> {
    let err = || Error::InvalidConfig(format!("invalid ARMA order '{s}', expected 'p,q'"));
    let (p, q) = s.split_once(',').ok_or_else(err)?;
    Ok((
        p.trim().parse().map_err(|_| err())?,
        q.trim().parse().map_err(|_| err())?,
    ))
}

fn parse_direction(s: &str) -> Result<Direction, Error> {
    match s {
        "x-to-y" => Ok(Direction::XToY),
        "y-to-x" => Ok(Direction::YToX),
        "both" => Ok(Direction::Both),
        other => Err(Error::InvalidConfig(format!(
            "invalid direction '{other}' (expected x-to-y, y-to-x, both)"
        ))),
    }
}

fn csv_spec(col: &str, csv: &CsvArgs) -> Result<CsvSpec, Error> {
    Ok(CsvSpec {
        series_column: col.to_string(),
        date_column: csv.date_col.clone(),
        date_format: csv.date_format.parse::<DateFormat>()?,
        na_drop: csv.na_drop,
    })
}

fn sha256_file(path: &PathBuf) -> Result<String, Error> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn run_unitroot(args: &UnitrootArgs) -> Result<(), Error> {
    let ts = load_csv(&args.file, &csv_spec(&args.col, &args.csv)?)?;
    let max_lag = args
        .max_lag
        .unwrap_or_else(|| stationarity::default_max_lag(ts.len()));
    let panel = UnitRootPanel::run(ts.values(), max_lag, 0.05)?;
    println!(
        "Series '{}': {}..{} (T = {})",
        ts.name(),
        ts.start(),
        ts.end(),
        ts.len()
    );
    println!("{:>14} {:>14} {:>14} {:>14}", "ADF", "ADF trend", "PP", "PP trend");
    let fmt = |stat: f64, lag: usize, reject: bool| {
        format!("{stat:.3}({lag}){}", if reject { "**" } else { "" })
    };
    println!(
        "{:>14} {:>14} {:>14} {:>14}",
        fmt(
            panel.adf_constant.statistic,
            panel.adf_constant.selected_lag,
            panel.adf_constant.reject_unit_root_5pct
        ),
        fmt(
            panel.adf_trend.statistic,
            panel.adf_trend.selected_lag,
            panel.adf_trend.reject_unit_root_5pct
        ),
        fmt(
            panel.pp_constant.statistic,
            panel.pp_constant.bandwidth,
            panel.pp_constant.reject_unit_root_5pct
        ),
        fmt(
            panel.pp_trend.statistic,
            panel.pp_trend.bandwidth,
            panel.pp_trend.reject_unit_root_5pct
        ),
    );
    println!(
        "5% critical values: {:.3} (constant), {:.3} (trend); ** rejects the unit root",
        panel.adf_constant.critical_values.pct5, panel.adf_trend.critical_values.pct5
    );
    Ok(())
}

fn run_test(args: &TestArgs) -> Result<(), Error> {
    let x = load_csv(&args.x, &csv_spec(&args.xcol, &args.csv)?)?;
    let y = load_csv(&args.y, &csv_spec(&args.ycol, &args.csv)?)?;
    let config = SpectralConfig {
        alpha: args.alpha,
        truncation: parse_truncation(&args.m)?,
        grid_size: args.grid,
        band_split: args.band_split,
        band_min_fraction: 0.5,
        arma_x: args.arma_x.as_deref().map(parse_order).transpose()?,
        arma_y: args.arma_y.as_deref().map(parse_order).transpose()?,
        direction: parse_direction(&args.direction)?,
    };
    let mut report = pipeline::run_pipeline(&x, &y, &config)?;
    report.provenance.inputs = vec![
        InputFile {
            path: args.x.display().to_string(),
            column: args.xcol.clone(),
            sha256: sha256_file(&args.x)?,
        },
        InputFile {
            path: args.y.display().to_string(),
            column: args.ycol.clone(),
            sha256: sha256_file(&args.y)?,
        },
    ];
    let files = freqgc::report::emit_report(&report, &args.out, !args.no_svg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for p in files
        .curve_csvs
        .iter()
        .chain(std::iter::once(&files.summary))
        .chain(files.svgs.iter())
    {
        println!("{}", p.display());
    }
    Ok(())
}

fn run_mc(args: &McArgs) -> Result<(), Error> {
    let coefficients: Vec<f64> = if args.b.trim().is_empty() {
        Vec::new()
    } else {
        args.b
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("invalid coefficient '{s}'")))
            })
            .collect::<Result<_, _>>()?
    };
    let gen = TransferGenerator {
        transfer_coefficients: coefficients,
        cause_std: args.cause_std,
        noise_std: args.noise_std,
        length: args.t,
        seed: args.seed,
    };
    let config = SpectralConfig {
        alpha: args.alpha,
        truncation: parse_truncation(&args.m)?,
        grid_size: args.grid,
        ..SpectralConfig::default()
    };
    let summary = freqgc::synthetic::mc_study(&gen, &config, args.reps, args.prewhiten)?;
    let csv = summary.to_csv();
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Unitroot(args) => run_unitroot(args),
        Command::Test(args) => run_test(args),
        Command::Mc(args) => run_mc(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
