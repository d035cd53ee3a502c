//! Bartlett-weighted spectra, cross-spectra, coherence, and the
//! frequency-by-frequency Granger coherence test.
//!
//! All estimators run on (already whitened) innovation series. Covariances
//! use the biased 1/T divisor at every lag, which keeps the implied spectral
//! matrix positive semi-definite and the full coherence inside [0, 1]. The
//! transform convention is `e^{-i lambda k}` throughout; a lag mask selects
//! which part of the cross-covariance sequence enters, so the directional
//! (Granger) numerator is the negative-lag sum where the cause leads the
//! effect.

use num_complex::Complex64;

use crate::config::SpectralConfig;
use crate::error::{Error, Result};

/// Triangular (Bartlett) lag window with truncation lag `M`:
/// `w_k = 1 - |k|/M` for `|k| <= M`, zero beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightScheme {
    m: usize,
}

impl WeightScheme {
    pub fn bartlett(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidConfig(format!(
                "truncation lag must be at least 2, got {m}"
            )));
        }
        Ok(WeightScheme { m })
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn weight(&self, k: i64) -> f64 {
        let a = k.unsigned_abs() as usize;
        if a >= self.m {
            0.0
        } else {
            1.0 - a as f64 / self.m as f64
        }
    }

    /// `sum_{k=-M..M} w_k^2`.
    pub fn sum_sq_full(&self) -> f64 {
        1.0 + 2.0 * self.sum_sq_negative()
    }

    /// `sum_{k=-M..-1} w_k^2`.
    pub fn sum_sq_negative(&self) -> f64 {
        (1..self.m).map(|j| self.weight(j as i64).powi(2)).sum()
    }
}

/// Which lags of the cross-covariance sequence enter a cross-spectrum sum.
/// The three partial masks partition `full`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagMask {
    Full,
    /// k = 0 only: the instantaneous relationship.
    Instantaneous,
    /// k < 0: lagged values of the first series explain the second.
    NegativeLags,
    /// k > 0: lagged values of the second series explain the first.
    PositiveLags,
}

impl LagMask {
    fn admits(&self, k: i64) -> bool {
        match self {
            LagMask::Full => true,
            LagMask::Instantaneous => k == 0,
            LagMask::NegativeLags => k < 0,
            LagMask::PositiveLags => k > 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceKind {
    Auto,
    Cross,
}

/// Empirical auto- or cross-covariances over lags `-M..M`.
#[derive(Debug, Clone)]
pub struct CovarianceSequence {
    m: usize,
    /// Index `i` holds the lag `k = i - M`.
    values: Vec<f64>,
    pub kind: CovarianceKind,
}

impl CovarianceSequence {
    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn at(&self, k: i64) -> f64 {
        let idx = k + self.m as i64;
        self.values[idx as usize]
    }
}

fn validate_finite(series: &[f64]) -> Result<()> {
    for (i, v) in series.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
    }
    Ok(())
}

fn validate_frequency(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < std::f64::consts::PI) {
        return Err(Error::FrequencyOutOfRange { lambda });
    }
    Ok(())
}

fn mean(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// `(1/T) sum_t (x_t - xbar)(y_{t-k} - ybar)` over the valid `t` range.
///
/// The divisor is `T` at every lag.
pub fn demeaned_covariance(x: &[f64], y: &[f64], k: i64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let t = x.len();
    if k.unsigned_abs() as usize >= t {
        return Err(Error::LagOutOfRange { lag: k, len: t });
    }
    validate_finite(x)?;
    validate_finite(y)?;
    let xbar = mean(x);
    let ybar = mean(y);
    Ok(covariance_raw(x, y, xbar, ybar, k))
}

fn covariance_raw(x: &[f64], y: &[f64], xbar: f64, ybar: f64, k: i64) -> f64 {
    let t = x.len() as i64;
    let lo = k.max(0);
    let hi = (t + k.min(0)) as usize;
    let mut acc = 0.0;
    for ti in lo as usize..hi {
        acc += (x[ti] - xbar) * (y[(ti as i64 - k) as usize] - ybar);
    }
    acc / t as f64
}

/// All covariances `gamma_xy(k)` for `k = -M..M` in one pass.
pub fn cross_covariances(x: &[f64], y: &[f64], m: usize) -> Result<CovarianceSequence> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if m >= x.len() {
        return Err(Error::LagOutOfRange {
            lag: m as i64,
            len: x.len(),
        });
    }
    validate_finite(x)?;
    validate_finite(y)?;
    let xbar = mean(x);
    let ybar = mean(y);
    let values = (-(m as i64)..=m as i64)
        .map(|k| covariance_raw(x, y, xbar, ybar, k))
        .collect();
    let kind = if std::ptr::eq(x, y) {
        CovarianceKind::Auto
    } else {
        CovarianceKind::Cross
    };
    Ok(CovarianceSequence { m, values, kind })
}

pub fn auto_covariances(x: &[f64], m: usize) -> Result<CovarianceSequence> {
    let mut seq = cross_covariances(x, x, m)?;
    seq.kind = CovarianceKind::Auto;
    Ok(seq)
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn spectrum_from_cov(cov: &CovarianceSequence, scheme: &WeightScheme, lambda: f64) -> f64 {
    let m = scheme.truncation() as i64;
    let mut acc = cov.at(0);
    for k in 1..m {
        acc += 2.0 * scheme.weight(k) * cov.at(k) * (lambda * k as f64).cos();
    }
    acc / TWO_PI
}

fn cross_from_cov(
    cov: &CovarianceSequence,
    scheme: &WeightScheme,
    lambda: f64,
    mask: LagMask,
) -> Complex64 {
    let m = scheme.truncation() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -m..=m {
        if !mask.admits(k) {
            continue;
        }
        let w = scheme.weight(k);
        if w == 0.0 {
            continue;
        }
        let phase = -lambda * k as f64;
        acc += w * cov.at(k) * Complex64::new(phase.cos(), phase.sin());
    }
    acc / TWO_PI
}

/// Weighted-covariance estimate of the spectral density at `lambda`:
/// `(1/2pi) sum_{k=-M..M} w_k gamma(k) cos(lambda k)`.
pub fn spectrum(series: &[f64], scheme: &WeightScheme, lambda: f64) -> Result<f64> {
    validate_frequency(lambda)?;
    let cov = auto_covariances(series, scheme.truncation())?;
    Ok(spectrum_from_cov(&cov, scheme, lambda))
}

/// Weighted-covariance estimate of the cross-spectrum at `lambda`, restricted
/// to the lags admitted by `mask`:
/// `(1/2pi) sum_k w_k gamma_xy(k) e^{-i lambda k}`.
///
/// The real part is the cospectrum, the imaginary part the quadrature
/// spectrum. The three partial masks sum exactly to the `Full` value.
pub fn cross_spectrum(
    x: &[f64],
    y: &[f64],
    scheme: &WeightScheme,
    lambda: f64,
    mask: LagMask,
) -> Result<Complex64> {
    validate_frequency(lambda)?;
    let cov = cross_covariances(x, y, scheme.truncation())?;
    Ok(cross_from_cov(&cov, scheme, lambda, mask))
}

fn check_positive_variance(series: &[f64]) -> Result<()> {
    let m = mean(series);
    let var = series.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(())
}

/// Coefficient of coherence `|S_xy| / sqrt(S_x S_y)` at `lambda`, in [0, 1].
pub fn coherence(x: &[f64], y: &[f64], scheme: &WeightScheme, lambda: f64) -> Result<f64> {
    validate_frequency(lambda)?;
    check_positive_variance(x)?;
    check_positive_variance(y)?;
    let sx = spectrum(x, scheme, lambda)?;
    let sy = spectrum(y, scheme, lambda)?;
    let sxy = cross_spectrum(x, y, scheme, lambda, LagMask::Full)?;
    Ok(sxy.norm() / (sx * sy).sqrt())
}

/// Granger coefficient of coherence for the direction `x -> y`: the
/// cross-spectrum restricted to negative lags (x leading y) over the
/// geometric mean of the spectra. Reported unclamped; the population value
/// lies in [0, 1] but finite samples can exceed 1.
pub fn granger_coherence(x: &[f64], y: &[f64], scheme: &WeightScheme, lambda: f64) -> Result<f64> {
    validate_frequency(lambda)?;
    check_positive_variance(x)?;
    check_positive_variance(y)?;
    let sx = spectrum(x, scheme, lambda)?;
    let sy = spectrum(y, scheme, lambda)?;
    let sxy = cross_spectrum(x, y, scheme, lambda, LagMask::NegativeLags)?;
    Ok(sxy.norm() / (sx * sy).sqrt())
}

/// Sample sizes rescaled by the window weights, which calibrate the
/// chi-squared null distributions of the squared coherences.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveSampleSizes {
    /// `T / sum_{k=-M..M} w_k^2`, for the full coherence.
    pub n: f64,
    /// `T / sum_{k=-M..-1} w_k^2`, for the Granger coherence.
    pub n_prime: f64,
    pub t: usize,
    pub m: usize,
}

pub fn effective_sample_sizes(t: usize, scheme: &WeightScheme) -> Result<EffectiveSampleSizes> {
    if t <= 2 * scheme.truncation() {
        return Err(Error::InvalidConfig(format!(
            "series length {t} must exceed twice the truncation lag {}",
            scheme.truncation()
        )));
    }
    Ok(EffectiveSampleSizes {
        n: t as f64 / scheme.sum_sq_full(),
        n_prime: t as f64 / scheme.sum_sq_negative(),
        t,
        m: scheme.truncation(),
    })
}

/// Exact `(1 - alpha)` quantile of the chi-squared distribution with 2
/// degrees of freedom: `-2 ln(alpha)`.
pub fn chi2_quantile_2dof(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    Ok(-2.0 * alpha.ln())
}

/// Critical value for the coherence tests:
/// `sqrt(chi^2_{2,1-alpha} / (2 (n_eff - 1)))`. Pass `n` for the full
/// coherence and `n'` for the Granger coherence.
pub fn coherence_threshold(alpha: f64, n_effective: f64) -> Result<f64> {
    if n_effective <= 1.0 {
        return Err(Error::InvalidConfig(format!(
            "effective sample size must exceed 1, got {n_effective}"
        )));
    }
    Ok((chi2_quantile_2dof(alpha)? / (2.0 * (n_effective - 1.0))).sqrt())
}

/// Per-frequency coherence estimates with their critical values and
/// significance flags.
#[derive(Debug, Clone)]
pub struct CoherenceCurve {
    pub frequencies: Vec<f64>,
    pub h_full: Vec<f64>,
    pub h_granger: Vec<f64>,
    pub crit_full: f64,
    pub crit_granger: f64,
    pub significant_full: Vec<bool>,
    pub significant_granger: Vec<bool>,
    /// Cycle length implied by each frequency: `2 pi / lambda`.
    pub period_months: Vec<f64>,
    pub sizes: EffectiveSampleSizes,
    pub alpha: f64,
}

impl CoherenceCurve {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// The default frequency grid: `size` points `lambda_j = j pi / (size + 1)`,
/// strictly inside `(0, pi)`.
pub fn default_grid(size: usize) -> Vec<f64> {
    let denom = (size + 1) as f64;
    (1..=size)
        .map(|j| j as f64 * std::f64::consts::PI / denom)
        .collect()
}

/// Evaluate both coherences on an explicit frequency grid.
///
/// `cause` and `effect` are innovation (whitened) series of equal length.
/// Rejection of the no-causality null at a frequency means the Granger
/// coherence exceeds the `n'`-based critical value there.
pub fn gc_curve_at(
    cause: &[f64],
    effect: &[f64],
    frequencies: &[f64],
    scheme: &WeightScheme,
    alpha: f64,
) -> Result<CoherenceCurve> {
    if cause.len() != effect.len() {
        return Err(Error::LengthMismatch {
            left: cause.len(),
            right: effect.len(),
        });
    }
    if frequencies.is_empty() {
        return Err(Error::InvalidConfig("empty frequency grid".into()));
    }
    for &lambda in frequencies {
        validate_frequency(lambda)?;
    }
    check_positive_variance(cause)?;
    check_positive_variance(effect)?;

    let sizes = effective_sample_sizes(cause.len(), scheme)?;
    let crit_full = coherence_threshold(alpha, sizes.n)?;
    let crit_granger = coherence_threshold(alpha, sizes.n_prime)?;

    let m = scheme.truncation();
    let cov_x = auto_covariances(cause, m)?;
    let cov_y = auto_covariances(effect, m)?;
    let cov_xy = cross_covariances(cause, effect, m)?;

    let npts = frequencies.len();
    let mut curve = CoherenceCurve {
        frequencies: frequencies.to_vec(),
        h_full: Vec::with_capacity(npts),
        h_granger: Vec::with_capacity(npts),
        crit_full,
        crit_granger,
        significant_full: Vec::with_capacity(npts),
        significant_granger: Vec::with_capacity(npts),
        period_months: frequencies.iter().map(|l| TWO_PI / l).collect(),
        sizes,
        alpha,
    };
    for &lambda in frequencies {
        let sx = spectrum_from_cov(&cov_x, scheme, lambda);
        let sy = spectrum_from_cov(&cov_y, scheme, lambda);
        let denom = (sx * sy).sqrt();
        let h_full = cross_from_cov(&cov_xy, scheme, lambda, LagMask::Full).norm() / denom;
        let h_granger =
            cross_from_cov(&cov_xy, scheme, lambda, LagMask::NegativeLags).norm() / denom;
        curve.significant_full.push(h_full > crit_full);
        curve.significant_granger.push(h_granger > crit_granger);
        curve.h_full.push(h_full);
        curve.h_granger.push(h_granger);
    }
    Ok(curve)
}

/// Evaluate the curve on the configuration's default grid, resolving the
/// truncation lag (`M = round(sqrt(T))` when automatic).
pub fn gc_curve(cause: &[f64], effect: &[f64], config: &SpectralConfig) -> Result<CoherenceCurve> {
    config.validate(cause.len())?;
    let m = config.truncation.resolve(cause.len());
    let scheme = WeightScheme::bartlett(m)?;
    let grid = default_grid(config.grid_size);
    gc_curve_at(cause, effect, &grid, &scheme, config.alpha)
}

/// Significance tally for one frequency band.
#[derive(Debug, Clone, Copy)]
pub struct BandVerdict {
    pub points: usize,
    pub significant: usize,
    pub fraction: f64,
    pub causal: bool,
}

/// Long-term / short-term verdicts from a coherence curve, split at a
/// frequency boundary (inclusive on the long-term side).
#[derive(Debug, Clone, Copy)]
pub struct BandSummary {
    pub long_term: BandVerdict,
    pub short_term: BandVerdict,
    pub split: f64,
    pub min_fraction: f64,
}

/// Partition the curve's grid at `lambda = split` (a point exactly on the
/// boundary belongs to the long-term band) and call a band causal when the
/// fraction of significant Granger frequencies exceeds `min_fraction`.
pub fn classify_bands(curve: &CoherenceCurve, split: f64, min_fraction: f64) -> Result<BandSummary> {
    if curve.is_empty() {
        return Err(Error::InvalidConfig("empty coherence curve".into()));
    }
    if !(split > 0.0 && split < std::f64::consts::PI) {
        return Err(Error::InvalidConfig(format!(
            "band split {split} outside (0, pi)"
        )));
    }
    let mut long = (0usize, 0usize);
    let mut short = (0usize, 0usize);
    for (lambda, sig) in curve.frequencies.iter().zip(&curve.significant_granger) {
        let slot = if *lambda <= split { &mut long } else { &mut short };
        slot.0 += 1;
        if *sig {
            slot.1 += 1;
        }
    }
    let verdict = |(points, significant): (usize, usize)| {
        let fraction = if points == 0 {
            0.0
        } else {
            significant as f64 / points as f64
        };
        BandVerdict {
            points,
            significant,
            fraction,
            causal: fraction > min_fraction,
        }
    };
    Ok(BandSummary {
        long_term: verdict(long),
        short_term: verdict(short),
        split,
        min_fraction,
    })
}
