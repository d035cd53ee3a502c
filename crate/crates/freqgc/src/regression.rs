//! Shared ordinary-least-squares kernel used by the unit-root tests and the
//! ARMA starting values.
//!
//! Solves via Householder QR (no normal equations), which keeps the
//! conditioning of near-collinear unit-root designs manageable and makes rank
//! deficiency detectable from the triangular factor.

use crate::error::{Error, Result};

/// Result of an OLS fit.
#[derive(Debug, Clone)]
pub struct LeastSquaresFit {
    /// One coefficient per design column, in input order.
    pub coefficients: Vec<f64>,
    /// `response - fitted`, one entry per row.
    pub residuals: Vec<f64>,
    /// Conventional OLS standard errors, `s^2 (X'X)^{-1}` diagonal.
    pub std_errors: Vec<f64>,
    /// Sum of squared residuals.
    pub ssr: f64,
}

impl LeastSquaresFit {
    /// t-ratio of coefficient `i`.
    pub fn t_ratio(&self, i: usize) -> f64 {
        self.coefficients[i] / self.std_errors[i]
    }
}

const RANK_TOL: f64 = 1e-11;

/// Ordinary least squares of `response` on the given design columns.
///
/// Errors with [`Error::RankDeficient`] when a column is (numerically) a
/// linear combination of the preceding ones, and with
/// [`Error::NotEnoughRows`] when there are not strictly more rows than
/// columns.
pub fn least_squares(columns: &[Vec<f64>], response: &[f64]) -> Result<LeastSquaresFit> {
    let k = columns.len();
    let n = response.len();
    if k == 0 || n <= k {
        return Err(Error::NotEnoughRows { rows: n, cols: k });
    }
    for col in columns {
        if col.len() != n {
            return Err(Error::LengthMismatch {
                left: col.len(),
                right: n,
            });
        }
    }

    // Working copies; `r` holds the columns and is overwritten by the QR
    // factorization (Householder vectors below the diagonal, R on and above).
    let mut r: Vec<Vec<f64>> = columns.to_vec();
    let mut qty = response.to_vec();
    let mut rdiag = vec![0.0_f64; k];

    let col_scale: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0))
        .collect();

    for j in 0..k {
        let norm = r[j][j..n].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= RANK_TOL * col_scale[j] {
            return Err(Error::RankDeficient { column: j });
        }
        let alpha = if r[j][j] >= 0.0 { -norm } else { norm };
        r[j][j] -= alpha; // Householder vector v lives in r[j][j..]
        let inv = 1.0 / (alpha * r[j][j]); // = -2 / v'v
        rdiag[j] = alpha;

        for target in (j + 1)..k {
            let dot: f64 = (j..n).map(|i| r[j][i] * r[target][i]).sum();
            let scale = dot * inv;
            for i in j..n {
                r[target][i] += scale * r[j][i];
            }
        }
        let dot: f64 = (j..n).map(|i| r[j][i] * qty[i]).sum();
        let scale = dot * inv;
        for i in j..n {
            qty[i] += scale * r[j][i];
        }
    }

    // Back-substitution: R beta = (Q'y)[..k].
    let mut beta = vec![0.0_f64; k];
    for j in (0..k).rev() {
        let mut acc = qty[j];
        for l in (j + 1)..k {
            acc -= r[l][j] * beta[l];
        }
        beta[j] = acc / rdiag[j];
    }

    // Residuals from the original data, not from the transformed system.
    let mut residuals = response.to_vec();
    for (j, col) in columns.iter().enumerate() {
        let b = beta[j];
        for (res, x) in residuals.iter_mut().zip(col) {
            *res -= b * x;
        }
    }
    let ssr: f64 = residuals.iter().map(|v| v * v).sum();

    // (X'X)^{-1} = R^{-1} R^{-T}; its diagonal entries are the squared row
    // norms of R^{-1}.
    let mut rinv = vec![vec![0.0_f64; k]; k]; // rinv[row][col], upper triangular
    for j in 0..k {
        rinv[j][j] = 1.0 / rdiag[j];
        for i in (0..j).rev() {
            let mut acc = 0.0;
            for l in (i + 1)..=j {
                acc += r[l][i] * rinv[l][j];
            }
            rinv[i][j] = -acc / rdiag[i];
        }
    }
    let s2 = ssr / (n - k) as f64;
    let std_errors: Vec<f64> = (0..k)
        .map(|i| {
            let rownorm2: f64 = (i..k).map(|j| rinv[i][j] * rinv[i][j]).sum();
            (s2 * rownorm2).sqrt()
        })
        .collect();

    Ok(LeastSquaresFit {
        coefficients: beta,
        residuals,
        std_errors,
        ssr,
    })
}
