//! ARMA order selection, fitting, and innovation extraction.
//!
//! ```text
//! cargo run --release --example prewhiten_series
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use freqgc::prewhiten::{fit_arma, innovations, select_arma_order};

fn main() {
    // Simulate an ARMA(1,1): y_t = 0.6 y_{t-1} + e_t + 0.3 e_{t-1}.
    let t = 2000;
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let eps: Vec<f64> = (0..t + 200).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut y = vec![0.0; t + 200];
    for i in 1..y.len() {
        y[i] = 0.6 * y[i - 1] + eps[i] + 0.3 * eps[i - 1];
    }
    let y = &y[200..];

    let (p, q) = select_arma_order(y, 4, 4).unwrap();
    println!("BIC-selected order over the 0..=4 grid: ({p},{q})");

    let model = fit_arma(y, p, q).unwrap();
    println!(
        "fitted: mean = {:.4}, ar = {:?}, ma = {:?}, sigma^2 = {:.4}, BIC = {:.1}",
        model.intercept,
        model
            .ar_coefficients
            .iter()
            .map(|c| (c * 1e4).round() / 1e4)
            .collect::<Vec<_>>(),
        model
            .ma_coefficients
            .iter()
            .map(|c| (c * 1e4).round() / 1e4)
            .collect::<Vec<_>>(),
        model.innovation_variance,
        model.information_criterion
    );
    println!("near unit root: {}", model.near_unit_root());

    let innov = innovations(y, &model).unwrap();
    let e = &innov.values;
    let g0: f64 = e.iter().map(|v| v * v).sum();
    println!("\ninnovations: length {}, mean {:.2e}", e.len(), innov.sample_mean);
    print!("residual autocorrelations:");
    for k in 1..=5 {
        let gk: f64 = (k..e.len()).map(|i| e[i] * e[i - k]).sum();
        print!(" rho({k}) = {:+.3}", gk / g0);
    }
    println!();
    println!("whiteness band: +-2/sqrt(T) = +-{:.3}", 2.0 / (e.len() as f64).sqrt());
}
