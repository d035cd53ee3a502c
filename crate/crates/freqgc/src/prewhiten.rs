//! ARMA prewhitening: fit univariate ARMA models and extract the innovation
//! series on which the spectral causality test runs.
//!
//! Estimation minimizes the conditional sum of squares (pre-sample values and
//! residuals set to zero), a deliberate approximation that is adequate for
//! prewhitening and keeps every candidate order on the same effective sample
//! of all T residuals. Stationarity and invertibility are enforced by
//! optimizing through the partial-autocorrelation transform: unconstrained
//! parameters map through tanh to partials in (-1, 1), which the
//! Durbin-Levinson recursion turns into admissible coefficient vectors.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::NelderMead;

/// A fitted ARMA(p,q) model in mean form:
/// `(y_t - mu) = sum phi_i (y_{t-i} - mu) + eps_t + sum theta_j eps_{t-j}`.
#[derive(Debug, Clone)]
pub struct ArmaModel {
    pub p: usize,
    pub q: usize,
    /// The process mean `mu`.
    pub intercept: f64,
    pub ar_coefficients: Vec<f64>,
    pub ma_coefficients: Vec<f64>,
    /// Conditional sum of squares divided by T.
    pub innovation_variance: f64,
    /// BIC of the fit: `T (ln(2 pi sigma^2) + 1) + (p + q + 2) ln T`.
    pub information_criterion: f64,
}

impl ArmaModel {
    pub fn order(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Check stationarity of the AR part and invertibility of the MA part by
    /// inverting the Durbin-Levinson recursion; every partial must lie
    /// strictly inside (-1, 1).
    pub fn validate(&self) -> Result<()> {
        if self.ar_coefficients.len() != self.p || self.ma_coefficients.len() != self.q {
            return Err(Error::InvalidConfig(
                "coefficient lengths disagree with declared order".into(),
            ));
        }
        if poly_to_pacf(&self.ar_coefficients).is_none() {
            return Err(Error::InvalidConfig(
                "AR polynomial is not stationary".into(),
            ));
        }
        let neg: Vec<f64> = self.ma_coefficients.iter().map(|t| -t).collect();
        if poly_to_pacf(&neg).is_none() {
            return Err(Error::InvalidConfig(
                "MA polynomial is not invertible".into(),
            ));
        }
        Ok(())
    }

    /// True when an AR partial coefficient sits within 0.02 of the unit
    /// boundary, i.e. the fitted model is close to non-stationary.
    pub fn near_unit_root(&self) -> bool {
        match poly_to_pacf(&self.ar_coefficients) {
            Some(partials) => partials.iter().any(|r| r.abs() > 0.98),
            None => true,
        }
    }
}

/// Zero-mean whitened residuals with the model that produced them.
#[derive(Debug, Clone)]
pub struct InnovationSeries {
    pub values: Vec<f64>,
    pub source_model: ArmaModel,
    /// Mean of `values` after the mandatory demeaning step; zero up to
    /// floating-point roundoff.
    pub sample_mean: f64,
}

/// Durbin-Levinson: partial coefficients in (-1,1) to a stationary
/// coefficient vector.
fn pacf_to_poly(partials: &[f64]) -> Vec<f64> {
    let p = partials.len();
    let mut coeffs = vec![0.0_f64; p];
    let mut prev = vec![0.0_f64; p];
    for k in 0..p {
        coeffs[k] = partials[k];
        for i in 0..k {
            coeffs[i] = prev[i] - partials[k] * prev[k - 1 - i];
        }
        prev[..=k].copy_from_slice(&coeffs[..=k]);
    }
    coeffs
}

/// Inverse Durbin-Levinson; `None` when the vector is not stationary.
fn poly_to_pacf(coeffs: &[f64]) -> Option<Vec<f64>> {
    let p = coeffs.len();
    let mut partials = vec![0.0_f64; p];
    let mut work = coeffs.to_vec();
    for k in (0..p).rev() {
        let r = work[k];
        if r.abs() >= 1.0 {
            return None;
        }
        partials[k] = r;
        if k == 0 {
            break;
        }
        let denom = 1.0 - r * r;
        let prev = work.clone();
        for i in 0..k {
            work[i] = (prev[i] + r * prev[k - 1 - i]) / denom;
        }
    }
    Some(partials)
}

/// Residual recursion with zero pre-sample values; `z` is the mean-adjusted
/// series. Returns all T residuals.
fn css_residuals(z: &[f64], ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let t = z.len();
    let mut eps = Vec::with_capacity(t);
    for ti in 0..t {
        let mut e = z[ti];
        for (i, phi) in ar.iter().enumerate() {
            if ti > i {
                e -= phi * z[ti - 1 - i];
            }
        }
        for (j, theta) in ma.iter().enumerate() {
            if ti > j {
                e -= theta * eps[ti - 1 - j];
            }
        }
        eps.push(e);
    }
    eps
}

fn sample_mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_sd(x: &[f64], mean: f64) -> f64 {
    (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64).sqrt()
}

/// Sample partial autocorrelations at lags 1..=p via Durbin-Levinson on the
/// sample autocorrelations.
fn sample_pacf(x: &[f64], p: usize) -> Vec<f64> {
    let t = x.len();
    let xbar = sample_mean(x);
    let gamma0: f64 = x.iter().map(|v| (v - xbar) * (v - xbar)).sum::<f64>() / t as f64;
    if gamma0 <= 0.0 {
        return vec![0.0; p];
    }
    let rho: Vec<f64> = (1..=p)
        .map(|k| {
            let mut acc = 0.0;
            for ti in k..t {
                acc += (x[ti] - xbar) * (x[ti - k] - xbar);
            }
            acc / t as f64 / gamma0
        })
        .collect();
    let mut partials = vec![0.0_f64; p];
    let mut phi = vec![0.0_f64; p];
    let mut prev = vec![0.0_f64; p];
    for k in 0..p {
        let mut num = rho[k];
        let mut den = 1.0;
        for i in 0..k {
            num -= prev[i] * rho[k - 1 - i];
            den -= prev[i] * rho[i];
        }
        let r = if den.abs() < 1e-12 { 0.0 } else { num / den };
        let r = r.clamp(-0.97, 0.97);
        partials[k] = r;
        phi[k] = r;
        for i in 0..k {
            phi[i] = prev[i] - r * prev[k - 1 - i];
        }
        prev[..=k].copy_from_slice(&phi[..=k]);
    }
    partials
}

const MIN_LEN: usize = 20;

fn validate_series(series: &[f64]) -> Result<(f64, f64)> {
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
    let mean = sample_mean(series);
    let sd = sample_sd(series, mean);
    if sd <= 0.0 || !sd.is_finite() {
        return Err(Error::ZeroVariance);
    }
    Ok((mean, sd))
}

fn bic(t: usize, sigma2: f64, n_params: usize) -> f64 {
    let t = t as f64;
    t * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0) + n_params as f64 * t.ln()
}

/// Fit an ARMA(p,q) model by conditional sum of squares.
///
/// The optimizer runs on the standardized series (so the fit is exactly
/// scale-equivariant) from up to two starting points: partials taken from the
/// sample PACF, and zeros. Non-convergence of every start within the
/// evaluation budget of `700 (p + q + 1)` objective evaluations per start is
/// an error.
pub fn fit_arma(series: &[f64], p: usize, q: usize) -> Result<ArmaModel> {
    let (mean, sd) = validate_series(series)?;
    let t = series.len();
    if (p + q) * 10 >= t {
        return Err(Error::InvalidOrder { p, q, len: t });
    }

    let std_series: Vec<f64> = series.iter().map(|v| (v - mean) / sd).collect();

    if p == 0 && q == 0 {
        let css: f64 = std_series.iter().map(|v| v * v).sum();
        let sigma2 = css / t as f64 * sd * sd;
        return Ok(ArmaModel {
            p,
            q,
            intercept: mean,
            ar_coefficients: Vec::new(),
            ma_coefficients: Vec::new(),
            innovation_variance: sigma2,
            information_criterion: bic(t, sigma2, 2),
        });
    }

    // params = [mu, u_ar(1..p), u_ma(1..q)] in standardized units.
    let dim = 1 + p + q;
    let unpack = |params: &[f64]| -> (f64, Vec<f64>, Vec<f64>) {
        let mu = params[0];
        let ar_partials: Vec<f64> = params[1..1 + p].iter().map(|u| u.tanh()).collect();
        let ma_partials: Vec<f64> = params[1 + p..].iter().map(|u| u.tanh()).collect();
        let ar = pacf_to_poly(&ar_partials);
        let theta: Vec<f64> = pacf_to_poly(&ma_partials).iter().map(|c| -c).collect();
        (mu, ar, theta)
    };
    let objective = |params: &[f64]| -> f64 {
        let (mu, ar, theta) = unpack(params);
        let z: Vec<f64> = std_series.iter().map(|v| v - mu).collect();
        css_residuals(&z, &ar, &theta).iter().map(|e| e * e).sum()
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    {
        let mut s = vec![0.0; dim];
        if p > 0 {
            for (slot, r) in s[1..1 + p].iter_mut().zip(sample_pacf(&std_series, p)) {
                *slot = r.atanh();
            }
        }
        starts.push(s);
    }
    if p > 0 {
        starts.push(vec![0.0; dim]);
    }

    let nm = NelderMead {
        max_evals: 700 * dim,
        tol: 1e-9,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut last_err = None;
    for start in &starts {
        match nm.minimize(&objective, start, 0.25) {
            Ok((x, v)) => {
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((x, v));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let (params, css) = match best {
        Some(b) => b,
        None => return Err(last_err.unwrap_or(Error::NonConvergence { evaluations: 0 })),
    };

    let (mu, ar, theta) = unpack(&params);
    let sigma2 = css / t as f64 * sd * sd;
    Ok(ArmaModel {
        p,
        q,
        intercept: mean + mu * sd,
        ar_coefficients: ar,
        ma_coefficients: theta,
        innovation_variance: sigma2,
        information_criterion: bic(t, sigma2, p + q + 2),
    })
}

/// Pick the (p, q) on the `0..=p_max x 0..=q_max` grid minimizing BIC.
///
/// Every candidate is fitted by CSS over the same T residuals, so the
/// criteria are directly comparable. Cells whose optimizer fails to converge
/// are skipped; ties break toward smaller `p + q`, then smaller `p`.
pub fn select_arma_order(series: &[f64], p_max: usize, q_max: usize) -> Result<(usize, usize)> {
    validate_series(series)?;
    let cells: Vec<(usize, usize)> = (0..=p_max)
        .flat_map(|p| (0..=q_max).map(move |q| (p, q)))
        .collect();
    let mut fitted: Vec<(f64, usize, usize, usize)> = cells
        .par_iter()
        .filter_map(|&(p, q)| {
            fit_arma(series, p, q)
                .ok()
                .map(|m| (m.information_criterion, p + q, p, q))
        })
        .collect();
    if fitted.is_empty() {
        return Err(Error::OrderSelectionFailed { p_max, q_max });
    }
    fitted.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let (_, _, p, q) = fitted[0];
    Ok((p, q))
}

/// One-step-ahead CSS residuals of `series` under `model`, then demeaned.
/// Length equals the input length; the first `max(p, q)` residuals are
/// conditioned on zero pre-sample values and retained.
pub fn innovations(series: &[f64], model: &ArmaModel) -> Result<InnovationSeries> {
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
    model.validate()?;
    let z: Vec<f64> = series.iter().map(|v| v - model.intercept).collect();
    let mut eps = css_residuals(&z, &model.ar_coefficients, &model.ma_coefficients);
    let m = sample_mean(&eps);
    for e in eps.iter_mut() {
        *e -= m;
    }
    let sample_mean = sample_mean(&eps);
    Ok(InnovationSeries {
        values: eps,
        source_model: model.clone(),
        sample_mean,
    })
}
