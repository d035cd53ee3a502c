//! Report emission: curve CSV, human-readable summary, and an SVG plot of
//! the coherence curve against its critical value.
//!
//! All outputs are deterministic functions of the report, so re-running on
//! identical inputs and configuration reproduces them byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::pipeline::{DirectionResult, GcReport, UnitRootPanel};
use crate::prewhiten::ArmaModel;
use crate::spectral::CoherenceCurve;

/// Paths written by [`emit_report`].
#[derive(Debug, Clone)]
pub struct ReportFiles {
    pub curve_csvs: Vec<PathBuf>,
    pub summary: PathBuf,
    pub svgs: Vec<PathBuf>,
}

/// Ten significant digits, scientific notation; stable across runs.
fn sig10(x: f64) -> String {
    format!("{x:.9e}")
}

/// Render one direction's curve as CSV.
pub fn curve_csv(direction: &DirectionResult, band_split: f64) -> String {
    let curve = &direction.curve;
    let mut out = String::from("lambda,period_months,h_granger,crit_granger,significant,band\n");
    for i in 0..curve.len() {
        let band = if curve.frequencies[i] <= band_split {
            "long"
        } else {
            "short"
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            sig10(curve.frequencies[i]),
            sig10(curve.period_months[i]),
            sig10(curve.h_granger[i]),
            sig10(curve.crit_granger),
            curve.significant_granger[i],
            band
        );
    }
    out
}

fn stars(stat: f64, cv: &crate::stationarity::CriticalValues) -> &'static str {
    if stat < cv.pct1 {
        "***"
    } else if stat < cv.pct5 {
        "**"
    } else if stat < cv.pct10 {
        "*"
    } else {
        ""
    }
}

fn unit_root_row(name: &str, panel: &UnitRootPanel) -> String {
    format!(
        "{:<16} {:>13} {:>13} {:>13} {:>13}\n",
        name,
        format!(
            "{:.3}({}){}",
            panel.adf_constant.statistic,
            panel.adf_constant.selected_lag,
            stars(panel.adf_constant.statistic, &panel.adf_constant.critical_values)
        ),
        format!(
            "{:.3}({}){}",
            panel.adf_trend.statistic,
            panel.adf_trend.selected_lag,
            stars(panel.adf_trend.statistic, &panel.adf_trend.critical_values)
        ),
        format!(
            "{:.3}({}){}",
            panel.pp_constant.statistic,
            panel.pp_constant.bandwidth,
            stars(panel.pp_constant.statistic, &panel.pp_constant.critical_values)
        ),
        format!(
            "{:.3}({}){}",
            panel.pp_trend.statistic,
            panel.pp_trend.bandwidth,
            stars(panel.pp_trend.statistic, &panel.pp_trend.critical_values)
        ),
    )
}

fn arma_line(name: &str, model: &ArmaModel) -> String {
    let ar = model
        .ar_coefficients
        .iter()
        .map(|c| format!("{c:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    let ma = model
        .ma_coefficients
        .iter()
        .map(|c| format!("{c:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "  {name}: ARMA({},{})  mean={:.6}  ar=[{ar}]  ma=[{ma}]  sigma2={:.6}  BIC={:.2}\n",
        model.p, model.q, model.intercept, model.innovation_variance, model.information_criterion
    )
}

/// Human-readable run summary: unit-root table, fitted filters, window
/// arithmetic, band verdicts, warnings, and provenance.
pub fn render_summary(report: &GcReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Frequency-domain Granger causality report (freqgc {})",
        report.provenance.version
    );
    let _ = writeln!(
        s,
        "Series: x = '{}', y = '{}', common sample {}..{} (T = {})",
        report.x_name, report.y_name, report.sample_start, report.sample_end, report.t
    );
    s.push('\n');

    s.push_str("Unit-root tests (statistic(lag or bandwidth), * 10% ** 5% *** 1%):\n");
    let _ = writeln!(
        s,
        "{:<16} {:>13} {:>13} {:>13} {:>13}",
        "", "ADF", "ADF trend", "PP", "PP trend"
    );
    s.push_str(&unit_root_row(&report.x_name, &report.unit_roots_x));
    s.push_str(&unit_root_row(&report.y_name, &report.unit_roots_y));
    s.push('\n');

    s.push_str("Prewhitening filters:\n");
    s.push_str(&arma_line(&report.x_name, &report.arma_x));
    s.push_str(&arma_line(&report.y_name, &report.arma_y));
    s.push('\n');

    let _ = writeln!(
        s,
        "Spectral window: Bartlett, M = {}, T = {}, n = {:.4}, n' = {:.4}",
        report.sizes.m, report.sizes.t, report.sizes.n, report.sizes.n_prime
    );
    let _ = writeln!(
        s,
        "Band split: lambda <= {} is long-term (cycle >= {:.2} months)",
        report.band_split,
        2.0 * std::f64::consts::PI / report.band_split
    );
    s.push('\n');

    for d in &report.directions {
        let _ = writeln!(
            s,
            "Direction {} -> {}: critical value {:.4} at alpha = {}",
            d.cause_name, d.effect_name, d.curve.crit_granger, report.alpha
        );
        for (label, band) in [("long-term", &d.bands.long_term), ("short-term", &d.bands.short_term)]
        {
            let _ = writeln!(
                s,
                "  {label}: {}/{} significant frequencies ({:.1}%) -> {}",
                band.significant,
                band.points,
                100.0 * band.fraction,
                if band.causal { "causal" } else { "not-causal" }
            );
        }
    }
    s.push('\n');

    if !report.warnings.is_empty() {
        s.push_str("Warnings:\n");
        for w in &report.warnings {
            let _ = writeln!(s, "  - {w}");
        }
        s.push('\n');
    }

    s.push_str("Provenance:\n");
    let _ = writeln!(s, "  config: {}", report.provenance.config_echo);
    for input in &report.provenance.inputs {
        let _ = writeln!(
            s,
            "  input: {} column '{}' sha256 {}",
            input.path, input.column, input.sha256
        );
    }
    s
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 480.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

/// Line plot of the Granger coherence curve: solid estimate, dashed
/// horizontal critical value, x-axis spanning (0, pi).
pub fn render_svg(curve: &CoherenceCurve, title: &str, band_split: f64) -> String {
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let ymax = curve
        .h_granger
        .iter()
        .cloned()
        .fold(curve.crit_granger, f64::max)
        .max(1.0)
        * 1.05;
    let xmax = std::f64::consts::PI;
    let sx = |lambda: f64| MARGIN_L + lambda / xmax * plot_w;
    let sy = |h: f64| MARGIN_T + (1.0 - h / ymax) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    svg.push('\n');
    let _ = writeln!(
        svg,
        r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" font-family="monospace" font-size="14" text-anchor="middle">{}</text>"#,
        SVG_W / 2.0,
        title
    );

    // Axes.
    let x0 = MARGIN_L;
    let y0 = MARGIN_T + plot_h;
    let _ = writeln!(
        svg,
        r#"<path d="M{x0} {MARGIN_T} L{x0} {y0} L{} {y0}" stroke="black" fill="none"/>"#,
        MARGIN_L + plot_w
    );
    // x ticks at 0, band split, pi/2, pi.
    for (v, label) in [
        (0.0, "0".to_string()),
        (band_split, format!("{band_split}")),
        (xmax / 2.0, "pi/2".to_string()),
        (xmax, "pi".to_string()),
    ] {
        let x = sx(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{label}</text>"#,
            y0 + 20.0
        );
    }
    // y ticks.
    let mut yt = 0.0;
    while yt <= ymax {
        let y = sy(yt);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{yt:.1}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
        yt += 0.2;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">frequency lambda</text>"#,
        MARGIN_L + plot_w / 2.0,
        SVG_H - 12.0
    );

    // Band boundary.
    let xs = sx(band_split);
    let _ = writeln!(
        svg,
        r##"<line x1="{xs:.2}" y1="{MARGIN_T}" x2="{xs:.2}" y2="{y0}" stroke="#bbbbbb" stroke-dasharray="2,4"/>"##
    );

    // Critical value: dashed horizontal line.
    let yc = sy(curve.crit_granger);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{yc:.4}" x2="{}" y2="{yc:.4}" stroke="black" stroke-dasharray="6,4" class="crit"/>"#,
        MARGIN_L + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{:.2}" font-family="monospace" font-size="11" text-anchor="end">{}% critical value</text>"#,
        MARGIN_L + plot_w - 4.0,
        yc - 6.0,
        curve.alpha * 100.0
    );

    // The estimate: solid polyline.
    let mut points = String::new();
    for (lambda, h) in curve.frequencies.iter().zip(&curve.h_granger) {
        let _ = write!(points, "{:.4},{:.4} ", sx(*lambda), sy(*h));
    }
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1f4e9c" stroke-width="1.5" class="estimate"/>"##,
        points.trim_end()
    );
    svg.push_str("</svg>\n");
    svg
}

fn direction_slug(d: &DirectionResult) -> String {
    fn slug(s: &str) -> String {
        let cleaned: String = s
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
            .collect();
        cleaned.trim_matches('_').to_string()
    }
    format!("{}_to_{}", slug(&d.cause_name), slug(&d.effect_name))
}

/// Write curve CSV(s), the summary, and (optionally) SVG plot(s) into
/// `out_dir`, creating it if needed.
pub fn emit_report(report: &GcReport, out_dir: &Path, with_svg: bool) -> Result<ReportFiles> {
    fs::create_dir_all(out_dir)?;
    let mut files = ReportFiles {
        curve_csvs: Vec::new(),
        summary: out_dir.join("summary.txt"),
        svgs: Vec::new(),
    };
    for d in &report.directions {
        let slug = direction_slug(d);
        let csv_path = out_dir.join(format!("curve_{slug}.csv"));
        fs::write(&csv_path, curve_csv(d, report.band_split))?;
        files.curve_csvs.push(csv_path);
        if with_svg {
            let title = format!("Granger coherence: {} -> {}", d.cause_name, d.effect_name);
            let svg_path = out_dir.join(format!("curve_{slug}.svg"));
            fs::write(&svg_path, render_svg(&d.curve, &title, report.band_split))?;
            files.svgs.push(svg_path);
        }
    }
    fs::write(&files.summary, render_summary(report))?;
    Ok(files)
}
