//! Size and power of the per-frequency Granger test, measured by Monte
//! Carlo against the closed-form population coherence.
//!
//! ```text
//! cargo run --release --example monte_carlo_calibration
//! ```

use freqgc::config::{LagTruncation, SpectralConfig};
use freqgc::synthetic::{mc_study, TransferGenerator};

fn print_summary(label: &str, summary: &freqgc::McSummary) {
    println!(
        "{label}: {} replications, T = {}, M = {}, crit = {:.4}",
        summary.replications, summary.sizes.t, summary.sizes.m, summary.crit_granger
    );
    println!(
        "{:>8} {:>10} {:>10} {:>12}",
        "lambda", "pop h", "mean h", "reject rate"
    );
    for i in 0..summary.frequencies.len() {
        println!(
            "{:>8.3} {:>10.4} {:>10.4} {:>12.3}",
            summary.frequencies[i],
            summary.population_h[i],
            summary.mean_h[i],
            summary.rejection_rates[i]
        );
    }
    println!();
}

fn main() {
    let config = SpectralConfig {
        grid_size: 8,
        truncation: LagTruncation::Fixed(24),
        ..SpectralConfig::default()
    };

    // Size: independent pair; rejection should hover around alpha = 5%.
    let null_gen = TransferGenerator::null(600, 1);
    let size = mc_study(&null_gen, &config, 1000, false).unwrap();
    print_summary("size under the null", &size);

    // Power: one-month transfer with population h = 0.7071 everywhere.
    let power_gen = TransferGenerator::lagged(&[1.0], 600, 2);
    let power = mc_study(&power_gen, &config, 1000, false).unwrap();
    print_summary("power, effect_t = cause_{t-1} + noise", &power);

    // Frequency-selective power: gain fades to zero at pi.
    let selective_gen = TransferGenerator::lagged(&[1.0, 1.0], 600, 3);
    let selective = mc_study(&selective_gen, &config, 1000, false).unwrap();
    print_summary("power, effect_t = cause_{t-1} + cause_{t-2} + noise", &selective);
}
