//! Minimal Nelder-Mead simplex minimizer for the ARMA conditional
//! sum-of-squares objective (dimension <= 9 in this crate).

use crate::error::{Error, Result};

pub(crate) struct NelderMead {
    pub max_evals: usize,
    /// Relative spread of simplex function values at which to stop.
    pub tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 8000,
            tol: 1e-12,
        }
    }
}

impl NelderMead {
    /// Minimize `f` starting from `start`, building the initial simplex by
    /// perturbing each coordinate by `step`. Returns (argmin, min).
    pub fn minimize<F>(&self, mut f: F, start: &[f64], step: f64) -> Result<(Vec<f64>, f64)>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = start.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
            *evals += 1;
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::MAX
            }
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        simplex.push(start.to_vec());
        for i in 0..dim {
            let mut v = start.to_vec();
            v[i] += step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

        loop {
            // Order: best first.
            let mut idx: Vec<usize> = (0..=dim).collect();
            idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
            simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
            values = idx.iter().map(|&i| values[i]).collect();

            let best = values[0];
            let worst = values[dim];
            if (worst - best).abs() <= self.tol * (best.abs() + self.tol) {
                return Ok((simplex[0].clone(), best));
            }
            if evals >= self.max_evals {
                return Err(Error::NonConvergence { evaluations: evals });
            }

            // Centroid of all but worst.
            let mut centroid = vec![0.0; dim];
            for v in simplex.iter().take(dim) {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim as f64;
                }
            }

            let point = |coef: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim])
                    .map(|(c, w)| c + coef * (c - w))
                    .collect()
            };

            let reflected = point(1.0);
            let fr = eval(&reflected, &mut evals);
            if fr < values[0] {
                let expanded = point(2.0);
                let fe = eval(&expanded, &mut evals);
                if fe < fr {
                    simplex[dim] = expanded;
                    values[dim] = fe;
                } else {
                    simplex[dim] = reflected;
                    values[dim] = fr;
                }
            } else if fr < values[dim - 1] {
                simplex[dim] = reflected;
                values[dim] = fr;
            } else {
                let contracted = if fr < values[dim] {
                    point(0.5) // outside
                } else {
                    point(-0.5) // inside
                };
                let fc = eval(&contracted, &mut evals);
                if fc < values[dim].min(fr) {
                    simplex[dim] = contracted;
                    values[dim] = fc;
                } else {
                    // Shrink toward best.
                    for i in 1..=dim {
                        let shrunk: Vec<f64> = simplex[0]
                            .iter()
                            .zip(&simplex[i])
                            .map(|(b, x)| b + 0.5 * (x - b))
                            .collect();
                        values[i] = eval(&shrunk, &mut evals);
                        simplex[i] = shrunk;
                    }
                }
            }
        }
    }
}
