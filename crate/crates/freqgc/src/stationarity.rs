//! Unit-root pre-tests: augmented Dickey-Fuller and Phillips-Perron.
//!
//! Critical values come from an embedded table simulated in-repo (see
//! `examples/generate_df_table.rs`); they are not copied from external
//! sources. Lookups interpolate linearly in 1/T between tabulated lengths.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::regression::{least_squares, LeastSquaresFit};

/// Deterministic terms included in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendSpec {
    /// Intercept only.
    ConstantOnly,
    /// Intercept plus linear trend.
    ConstantTrend,
}

impl TrendSpec {
    fn table_key(&self) -> &'static str {
        match self {
            TrendSpec::ConstantOnly => "constant",
            TrendSpec::ConstantTrend => "constant-trend",
        }
    }
}

/// How the ADF lag order was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagCriterion {
    /// Schwarz information criterion on a common effective sample.
    Sic,
}

/// Critical values at the three supported significance levels.
#[derive(Debug, Clone, Copy)]
pub struct CriticalValues {
    pub pct1: f64,
    pub pct5: f64,
    pub pct10: f64,
}

impl CriticalValues {
    pub fn get(&self, alpha: f64) -> Result<f64> {
        match alpha {
            a if a == 0.01 => Ok(self.pct1),
            a if a == 0.05 => Ok(self.pct5),
            a if a == 0.10 => Ok(self.pct10),
            other => Err(Error::UnsupportedAlpha { alpha: other }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdfResult {
    /// t-ratio on the lagged level in the ADF regression.
    pub statistic: f64,
    pub selected_lag: usize,
    pub criterion: LagCriterion,
    pub critical_values: CriticalValues,
    /// `statistic < pct5`; the left tail rejects the unit root.
    pub reject_unit_root_5pct: bool,
}

#[derive(Debug, Clone)]
pub struct PpResult {
    /// The Z_t statistic.
    pub statistic: f64,
    /// Newey-West bandwidth used for the long-run variance.
    pub bandwidth: usize,
    pub critical_values: CriticalValues,
    pub reject_unit_root_5pct: bool,
}

const MIN_LEN: usize = 25;

fn validate(series: &[f64]) -> Result<()> {
    if series.len() < MIN_LEN {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_LEN,
        });
    }
    for (i, v) in series.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
    }
    Ok(())
}

/// Schwert's rule of thumb: `floor(12 (T/100)^{1/4})`.
pub fn default_max_lag(t: usize) -> usize {
    (12.0 * (t as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Build the ADF regression `dy_t` on `{1, [t], y_{t-1}, dy_{t-1..lag}}`
/// using rows `t = start..T-1` (0-based differences index).
fn adf_regression(series: &[f64], trend: TrendSpec, lag: usize, start: usize) -> Result<LeastSquaresFit> {
    let t = series.len();
    let dy: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len() - start; // observations start..dy.len()-1

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(3 + lag);
    columns.push(vec![1.0; rows]);
    if trend == TrendSpec::ConstantTrend {
        columns.push((start..dy.len()).map(|i| (i + 1) as f64).collect());
    }
    columns.push((start..dy.len()).map(|i| series[i]).collect()); // y_{t-1}
    for j in 1..=lag {
        columns.push((start..dy.len()).map(|i| dy[i - j]).collect());
    }
    debug_assert!(start >= lag && start < dy.len() && t >= 2);
    let response: Vec<f64> = dy[start..].to_vec();
    least_squares(&columns, &response)
}

fn level_coef_index(trend: TrendSpec) -> usize {
    match trend {
        TrendSpec::ConstantOnly => 1,
        TrendSpec::ConstantTrend => 2,
    }
}

/// SIC values of the ADF regression for every lag `0..=max_lag`, all fitted
/// on the common effective sample that supports `max_lag` (so they are
/// directly comparable). `SIC = n ln(ssr/n) + k ln n`.
pub fn adf_sic_profile(series: &[f64], trend: TrendSpec, max_lag: usize) -> Result<Vec<f64>> {
    validate(series)?;
    let t = series.len();
    if max_lag * 4 >= t {
        return Err(Error::InvalidConfig(format!(
            "max_lag {max_lag} must be below T/4 for T = {t}"
        )));
    }
    let n = (t - 1 - max_lag) as f64;
    (0..=max_lag)
        .map(|lag| {
            let fit = adf_regression(series, trend, lag, max_lag)?;
            let k = level_coef_index(trend) + 1 + lag;
            Ok(n * (fit.ssr / n).ln() + k as f64 * n.ln())
        })
        .collect()
}

/// Augmented Dickey-Fuller test. The lag order minimizes the SIC over
/// `0..=max_lag`; the statistic is then re-estimated on the full sample
/// available at the chosen lag.
pub fn adf_test(series: &[f64], trend: TrendSpec, max_lag: usize, alpha: f64) -> Result<AdfResult> {
    let critical_values = critical_values_for(series.len(), trend)?;
    critical_values.get(alpha)?;
    let sic = adf_sic_profile(series, trend, max_lag)?;
    let selected_lag = sic
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let fit = adf_regression(series, trend, selected_lag, selected_lag)?;
    let statistic = fit.t_ratio(level_coef_index(trend));
    Ok(AdfResult {
        statistic,
        selected_lag,
        criterion: LagCriterion::Sic,
        critical_values,
        reject_unit_root_5pct: statistic < critical_values.pct5,
    })
}

/// Bartlett-kernel long-run variance of `residuals` with the given
/// truncation bandwidth: `gamma_0 + 2 sum_{j<=q} (1 - j/(q+1)) gamma_j`,
/// all covariances divided by n.
fn newey_west_long_run_variance(residuals: &[f64], bandwidth: usize) -> f64 {
    let n = residuals.len() as f64;
    let mut acc: f64 = residuals.iter().map(|e| e * e).sum::<f64>() / n;
    for j in 1..=bandwidth {
        let mut g = 0.0;
        for i in j..residuals.len() {
            g += residuals[i] * residuals[i - j];
        }
        g /= n;
        acc += 2.0 * (1.0 - j as f64 / (bandwidth + 1) as f64) * g;
    }
    acc
}

/// Newey-West automatic bandwidth `floor(4 (T/100)^{2/9})`.
pub fn newey_west_bandwidth(t: usize) -> usize {
    (4.0 * (t as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Phillips-Perron Z_t test: the no-augmentation Dickey-Fuller regression
/// with a nonparametric long-run variance correction of the t-ratio.
pub fn pp_test(series: &[f64], trend: TrendSpec, alpha: f64) -> Result<PpResult> {
    validate(series)?;
    let critical_values = critical_values_for(series.len(), trend)?;
    critical_values.get(alpha)?;

    let fit = adf_regression(series, trend, 0, 0)?;
    let idx = level_coef_index(trend);
    let t_ratio = fit.t_ratio(idx);
    let n = fit.residuals.len() as f64;
    let k = idx + 1;

    let bandwidth = newey_west_bandwidth(series.len());
    let gamma0: f64 = fit.ssr / n;
    let lam2 = newey_west_long_run_variance(&fit.residuals, bandwidth).max(1e-300);
    let s = (fit.ssr / (n - k as f64)).sqrt();
    let se_rho = fit.std_errors[idx];

    let statistic =
        (gamma0 / lam2).sqrt() * t_ratio - (lam2 - gamma0) * n * se_rho / (2.0 * lam2.sqrt() * s);

    Ok(PpResult {
        statistic,
        bandwidth,
        critical_values,
        reject_unit_root_5pct: statistic < critical_values.pct5,
    })
}

// --- critical-value table ------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct TableRow {
    t: usize,
    pct1: f64,
    pct5: f64,
    pct10: f64,
}

struct DfTable {
    constant: Vec<TableRow>,
    constant_trend: Vec<TableRow>,
}

static DF_TABLE: OnceLock<DfTable> = OnceLock::new();

fn df_table() -> &'static DfTable {
    DF_TABLE.get_or_init(|| {
        let raw = include_str!("data/df_critical_values.txt");
        let mut constant: Vec<TableRow> = Vec::new();
        let mut constant_trend: Vec<TableRow> = Vec::new();
        // columns: trend alpha T value
        let mut cells: std::collections::BTreeMap<(String, usize), [f64; 3]> =
            std::collections::BTreeMap::new();
        for line in raw.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let trend = parts.next().expect("trend column").to_string();
            let alpha: f64 = parts.next().expect("alpha column").parse().unwrap();
            let t: usize = parts.next().expect("T column").parse().unwrap();
            let value: f64 = parts.next().expect("value column").parse().unwrap();
            let slot = cells.entry((trend, t)).or_insert([f64::NAN; 3]);
            let i = match alpha {
                a if a == 0.01 => 0,
                a if a == 0.05 => 1,
                _ => 2,
            };
            slot[i] = value;
        }
        for ((trend, t), vals) in cells {
            let row = TableRow {
                t,
                pct1: vals[0],
                pct5: vals[1],
                pct10: vals[2],
            };
            if trend == "constant" {
                constant.push(row);
            } else {
                constant_trend.push(row);
            }
        }
        constant.sort_by_key(|r| r.t);
        constant_trend.sort_by_key(|r| r.t);
        DfTable {
            constant,
            constant_trend,
        }
    })
}

fn interpolate(rows: &[TableRow], t: usize, pick: impl Fn(&TableRow) -> f64) -> f64 {
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    if t <= first.t {
        return pick(first);
    }
    if t >= last.t {
        return pick(last);
    }
    let hi = rows.iter().position(|r| r.t >= t).unwrap();
    let (a, b) = (&rows[hi - 1], &rows[hi]);
    if b.t == t {
        return pick(b);
    }
    // Linear in 1/T.
    let (xa, xb, x) = (1.0 / a.t as f64, 1.0 / b.t as f64, 1.0 / t as f64);
    let w = (x - xa) / (xb - xa);
    pick(a) * (1.0 - w) + pick(b) * w
}

fn critical_values_for(t: usize, trend: TrendSpec) -> Result<CriticalValues> {
    if t < MIN_LEN {
        return Err(Error::SeriesTooShort { len: t, min: MIN_LEN });
    }
    let table = df_table();
    let rows = match trend {
        TrendSpec::ConstantOnly => &table.constant,
        TrendSpec::ConstantTrend => &table.constant_trend,
    };
    debug_assert!(!rows.is_empty(), "embedded table missing {}", trend.table_key());
    Ok(CriticalValues {
        pct1: interpolate(rows, t, |r| r.pct1),
        pct5: interpolate(rows, t, |r| r.pct5),
        pct10: interpolate(rows, t, |r| r.pct10),
    })
}

/// Dickey-Fuller critical value for a series of length `t`.
///
/// Supported levels: 0.01, 0.05, 0.10.
pub fn df_critical_value(t: usize, trend: TrendSpec, alpha: f64) -> Result<f64> {
    critical_values_for(t, trend)?.get(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn random_walk(seed: u64, n: usize) -> Vec<f64> {
        let steps = normals(seed, n);
        let mut y = Vec::with_capacity(n);
        let mut acc = 0.0;
        for s in steps {
            acc += s;
            y.push(acc);
        }
        y
    }

    #[test]
    fn critical_value_lookup() {
        let cv = df_critical_value(600, TrendSpec::ConstantOnly, 0.05).unwrap();
        assert!((cv + 2.87).abs() < 0.03, "constant 5% at T=600: {cv}");
        let cv_t = df_critical_value(600, TrendSpec::ConstantTrend, 0.05).unwrap();
        assert!((cv_t + 3.42).abs() < 0.03, "trend 5% at T=600: {cv_t}");
        // Levels are ordered.
        let cv1 = df_critical_value(600, TrendSpec::ConstantOnly, 0.01).unwrap();
        let cv10 = df_critical_value(600, TrendSpec::ConstantOnly, 0.10).unwrap();
        assert!(cv1 < cv && cv < cv10);
    }

    #[test]
    fn unsupported_alpha() {
        assert!(matches!(
            df_critical_value(600, TrendSpec::ConstantOnly, 0.07),
            Err(Error::UnsupportedAlpha { .. })
        ));
    }

    #[test]
    fn adf_rejects_white_noise() {
        let mut rejections = 0;
        let seeds = 200;
        for seed in 0..seeds {
            let y = normals(seed, 600);
            let r = adf_test(&y, TrendSpec::ConstantOnly, 6, 0.05).unwrap();
            if r.reject_unit_root_5pct {
                rejections += 1;
            }
        }
        assert!(rejections >= seeds * 97 / 100, "{rejections}/{seeds}");
    }

    #[test]
    fn adf_statistic_is_strongly_negative_for_noise() {
        let y = normals(7, 600);
        let r = adf_test(&y, TrendSpec::ConstantOnly, 18, 0.05).unwrap();
        assert!(r.statistic < -10.0, "stat {}", r.statistic);
        assert!(r.selected_lag <= 18);
        assert!(r.reject_unit_root_5pct);
    }

    #[test]
    fn adf_on_constant_series_is_degenerate() {
        let y = vec![5.0; 100];
        assert!(matches!(
            adf_test(&y, TrendSpec::ConstantOnly, 4, 0.05),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn adf_shift_and_scale_invariance() {
        let y = normals(9, 300);
        let shifted: Vec<f64> = y.iter().map(|v| v + 100.0).collect();
        let scaled: Vec<f64> = y.iter().map(|v| v * 7.5).collect();
        let base = adf_test(&y, TrendSpec::ConstantOnly, 5, 0.05).unwrap();
        let s1 = adf_test(&shifted, TrendSpec::ConstantOnly, 5, 0.05).unwrap();
        let s2 = adf_test(&scaled, TrendSpec::ConstantOnly, 5, 0.05).unwrap();
        assert!((base.statistic - s1.statistic).abs() < 1e-7);
        assert!((base.statistic - s2.statistic).abs() < 1e-7);
        assert_eq!(base.selected_lag, s1.selected_lag);
        assert_eq!(base.selected_lag, s2.selected_lag);
    }

    #[test]
    fn sic_minimum_is_monotone_in_grid_size() {
        // On a fixed common sample, enlarging the candidate grid can only
        // lower the achieved minimum.
        let y = normals(10, 400);
        let profile = adf_sic_profile(&y, TrendSpec::ConstantOnly, 10).unwrap();
        let mut best = f64::INFINITY;
        let mut minima = Vec::new();
        for s in &profile {
            best = best.min(*s);
            minima.push(best);
        }
        for w in minima.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn pp_rejects_stationary_ar1() {
        let mut rejections = 0;
        let seeds = 1000;
        for seed in 0..seeds {
            let eps = normals(1000 + seed, 800);
            let mut y = vec![0.0; 800];
            for i in 1..800 {
                y[i] = 0.5 * y[i - 1] + eps[i];
            }
            let r = pp_test(&y[200..], TrendSpec::ConstantOnly, 0.05).unwrap();
            if r.reject_unit_root_5pct {
                rejections += 1;
            }
        }
        assert!(rejections * 100 > seeds * 99, "{rejections}/{seeds}");
    }

    #[test]
    fn pp_bandwidth_rule() {
        assert_eq!(newey_west_bandwidth(603), 5);
        assert_eq!(newey_west_bandwidth(100), 4);
        let y = random_walk(3, 600);
        let r = pp_test(&y, TrendSpec::ConstantOnly, 0.05).unwrap();
        assert_eq!(r.bandwidth, newey_west_bandwidth(600));
    }

    #[test]
    fn rejection_flag_is_pure_threshold_comparison() {
        let y = random_walk(5, 400);
        let r = adf_test(&y, TrendSpec::ConstantOnly, 6, 0.05).unwrap();
        assert_eq!(r.reject_unit_root_5pct, r.statistic < r.critical_values.pct5);
        let p = pp_test(&y, TrendSpec::ConstantOnly, 0.05).unwrap();
        assert_eq!(p.reject_unit_root_5pct, p.statistic < p.critical_values.pct5);
    }

    #[test]
    fn short_series_rejected() {
        let y = normals(1, 20);
        assert!(matches!(
            adf_test(&y, TrendSpec::ConstantOnly, 2, 0.05),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            pp_test(&y, TrendSpec::ConstantOnly, 0.05),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn max_lag_bound_enforced() {
        let y = normals(2, 100);
        assert!(adf_test(&y, TrendSpec::ConstantOnly, 25, 0.05).is_err());
    }
}
