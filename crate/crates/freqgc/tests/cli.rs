//! Tests of the installed `freqgc` binary: exit codes, output files, and
//! determinism across reruns.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use freqgc::synthetic::TransferGenerator;

fn freqgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freqgc"))
        .args(args)
        .output()
        .expect("failed to spawn freqgc")
}

fn write_pair(dir: &Path, t: usize, seed: u64) -> (String, String) {
    let (x, y) = TransferGenerator::lagged(&[1.0], t, seed).generate().unwrap();
    let write = |name: &str, ts: &freqgc::TimeSeries| {
        let mut body = format!("date,{name}\n");
        for (m, v) in ts.months().zip(ts.values()) {
            let _ = writeln!(body, "{m},{v}");
        }
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, body).unwrap();
        path.display().to_string()
    };
    (write("sent", &x), write("ret", &y))
}

#[test]
fn test_subcommand_writes_report_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (xp, yp) = write_pair(dir.path(), 400, 31);
    let out1 = dir.path().join("out1");
    let out2 = dir.path().join("out2");
    for out in [&out1, &out2] {
        let o = freqgc(&[
            "test",
            "--x", &xp, "--xcol", "sent",
            "--y", &yp, "--ycol", "ret",
            "--m", "20",
            "--grid", "64",
            "--arma-x", "0,0",
            "--arma-y", "0,0",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    let csv1 = fs::read(out1.join("curve_sent_to_ret.csv")).unwrap();
    let csv2 = fs::read(out2.join("curve_sent_to_ret.csv")).unwrap();
    assert_eq!(csv1, csv2);
    assert!(out1.join("summary.txt").exists());
    assert!(out1.join("curve_sent_to_ret.svg").exists());
    let summary = fs::read_to_string(out1.join("summary.txt")).unwrap();
    assert!(summary.contains("sha256"), "provenance hashes missing");
}

#[test]
fn input_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let gap = dir.path().join("gap.csv");
    fs::write(&gap, "date,v\n2001-01,1\n2001-03,2\n").unwrap();
    let (xp, _) = write_pair(dir.path(), 300, 3);
    let o = freqgc(&[
        "test",
        "--x", &xp, "--xcol", "sent",
        "--y", gap.to_str().unwrap(), "--ycol", "v",
        "--out", dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("2001-02"), "stderr should name the gap: {stderr}");

    // Missing column is also an input error.
    let o = freqgc(&[
        "unitroot",
        "--file", &xp,
        "--col", "nope",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unitroot_prints_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let (xp, _) = write_pair(dir.path(), 300, 17);
    let o = freqgc(&["unitroot", "--file", &xp, "--col", "sent"]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("ADF"), "{stdout}");
    assert!(stdout.contains("T = 300"), "{stdout}");
    // White noise: both tests should flag rejection.
    assert!(stdout.contains("**"), "{stdout}");
}

#[test]
fn mc_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mc.csv");
    let o = freqgc(&[
        "mc",
        "--b", "1.0",
        "--t", "300",
        "--reps", "120",
        "--grid", "5",
        "--seed", "7",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# generator:"));
    assert!(lines.next().unwrap().starts_with("# config:"));
    assert_eq!(
        lines.next().unwrap(),
        "lambda,period_months,population_h,mean_h,rejection_rate"
    );
    assert_eq!(lines.count(), 5);
    // Strong single-lag transfer: high rejection everywhere.
    for line in text.lines().skip(3) {
        let rate: f64 = line.split(',').last().unwrap().parse().unwrap();
        assert!(rate > 0.8, "{line}");
    }
}

#[test]
fn mc_replication_floor_is_enforced() {
    let o = freqgc(&["mc", "--t", "300", "--reps", "50"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_code_two() {
    // A constant column makes the unit-root design rank deficient.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let mut body = String::from("date,v\n");
    for i in 0..200 {
        let _ = writeln!(body, "{},{}", freqgc::Month::new(2000, 1).unwrap().offset(i), 3.5);
    }
    fs::write(&path, body).unwrap();
    let o = freqgc(&["unitroot", "--file", path.to_str().unwrap(), "--col", "v"]);
    assert_eq!(o.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}
