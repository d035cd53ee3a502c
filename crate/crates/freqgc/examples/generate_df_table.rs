//! Regenerates the embedded Dickey-Fuller critical-value table by Monte
//! Carlo under the random-walk null.
//!
//! Writes the table to stdout; redirect it over the embedded data file:
//!
//! ```text
//! cargo run --release --example generate_df_table > crates/freqgc/src/data/df_critical_values.txt
//! ```
//!
//! Each cell (trend spec, series length) simulates `REPLICATIONS` pure random
//! walks, runs the lag-0 Dickey-Fuller regression, and tabulates the 1%, 5%,
//! and 10% quantiles of the t-ratio on the lagged level.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use freqgc::regression::least_squares;
use freqgc::stationarity::TrendSpec;

const REPLICATIONS: usize = 200_000;
const SEED: u64 = 0x5EED_DF01;
const LENGTHS: [usize; 10] = [25, 50, 75, 100, 150, 250, 400, 600, 1000, 1500];

fn df_t_ratio(y: &[f64], trend: TrendSpec) -> f64 {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len();
    let mut columns: Vec<Vec<f64>> = vec![vec![1.0; rows]];
    if trend == TrendSpec::ConstantTrend {
        columns.push((0..rows).map(|i| (i + 1) as f64).collect());
    }
    columns.push(y[..rows].to_vec());
    let fit = least_squares(&columns, &dy).expect("full-rank random-walk design");
    fit.t_ratio(columns.len() - 1)
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

fn main() {
    println!("# Dickey-Fuller critical values (t-ratio on the lagged level).");
    println!(
        "# Simulated under the random-walk null: {} replications per cell, ChaCha12 seed {:#x}.",
        REPLICATIONS, SEED
    );
    println!("# Quantiles interpolated between order statistics.");
    println!("# columns: trend alpha T value");

    for (spec_idx, trend) in [TrendSpec::ConstantOnly, TrendSpec::ConstantTrend]
        .into_iter()
        .enumerate()
    {
        let key = match trend {
            TrendSpec::ConstantOnly => "constant",
            TrendSpec::ConstantTrend => "constant-trend",
        };
        for (t_idx, &t) in LENGTHS.iter().enumerate() {
            let mut stats: Vec<f64> = (0..REPLICATIONS)
                .into_par_iter()
                .map(|r| {
                    let mut rng = ChaCha12Rng::seed_from_u64(SEED);
                    rng.set_stream(((spec_idx * LENGTHS.len() + t_idx) as u64) << 32 | r as u64);
                    let mut y = Vec::with_capacity(t);
                    let mut acc = 0.0;
                    for _ in 0..t {
                        let step: f64 = StandardNormal.sample(&mut rng);
                        acc += step;
                        y.push(acc);
                    }
                    df_t_ratio(&y, trend)
                })
                .collect();
            stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (alpha, label) in [(0.01, "0.01"), (0.05, "0.05"), (0.10, "0.10")] {
                println!("{key} {label} {t} {:.4}", quantile(&stats, alpha));
            }
        }
    }
}
