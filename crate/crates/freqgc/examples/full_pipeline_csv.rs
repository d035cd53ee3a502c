//! The full CSV-to-report pipeline, end to end: ingest two monthly series,
//! align, pre-test, prewhiten, test causality per frequency, classify bands,
//! and emit the report files.
//!
//! ```text
//! cargo run --release --example full_pipeline_csv
//! ```

use std::fmt::Write as _;
use std::fs;

use freqgc::config::{Direction, SpectralConfig};
use freqgc::pipeline::run_pipeline;
use freqgc::report::emit_report;
use freqgc::series::{align, load_csv, CsvSpec};
use freqgc::synthetic::TransferGenerator;

fn main() {
    let dir = std::env::temp_dir().join("freqgc_pipeline_demo");
    fs::create_dir_all(&dir).unwrap();

    // Fabricate two monthly CSV files with a one-month causal link.
    let (sentiment, returns) = TransferGenerator::lagged(&[0.8], 603, 20).generate().unwrap();
    for (name, ts) in [("sentiment", &sentiment), ("returns", &returns)] {
        let mut body = format!("date,{name}\n");
        for (m, v) in ts.months().zip(ts.values()) {
            let _ = writeln!(body, "{m},{v:.6}");
        }
        fs::write(dir.join(format!("{name}.csv")), body).unwrap();
    }

    let x = load_csv(&dir.join("sentiment.csv"), &CsvSpec::new("sentiment", "date")).unwrap();
    let y = load_csv(&dir.join("returns.csv"), &CsvSpec::new("returns", "date")).unwrap();
    let (x, y) = align(&x, &y).unwrap();
    println!("aligned sample: {}..{} (T = {})", x.start(), x.end(), x.len());

    let config = SpectralConfig {
        direction: Direction::Both,
        ..SpectralConfig::default()
    };
    let report = run_pipeline(&x, &y, &config).unwrap();
    for w in &report.warnings {
        println!("warning: {w}");
    }

    let out = dir.join("report");
    let files = emit_report(&report, &out, true).unwrap();
    println!("\nwrote:");
    for p in files
        .curve_csvs
        .iter()
        .chain(std::iter::once(&files.summary))
        .chain(files.svgs.iter())
    {
        println!("  {}", p.display());
    }

    println!("\n--- summary.txt ---");
    println!("{}", fs::read_to_string(&files.summary).unwrap());
}
