//! The per-frequency Granger test: coherence curve, significance pattern,
//! band verdicts, and an SVG plot.
//!
//! ```text
//! cargo run --release --example granger_curve
//! ```

use freqgc::config::{LagTruncation, SpectralConfig};
use freqgc::spectral::{classify_bands, gc_curve};
use freqgc::synthetic::TransferGenerator;

fn main() {
    // effect_t = cause_{t-1} + cause_{t-2} + noise_t: the transfer gain
    // 2 cos(lambda/2) fades toward zero at lambda = pi, so causality lives
    // at low frequencies only.
    let gen = TransferGenerator::lagged(&[1.0, 1.0], 2000, 12);
    let (cause, effect) = gen.generate().unwrap();

    let config = SpectralConfig {
        grid_size: 64,
        truncation: LagTruncation::Auto, // M = round(sqrt(T)) = 45
        ..SpectralConfig::default()
    };
    let curve = gc_curve(cause.values(), effect.values(), &config).unwrap();
    println!(
        "T = {}, M = {}, n = {:.2}, n' = {:.2}, 5% critical value = {:.4}\n",
        curve.sizes.t, curve.sizes.m, curve.sizes.n, curve.sizes.n_prime, curve.crit_granger
    );

    println!("{:>8} {:>10} {:>8} {:>6}   bar", "lambda", "period(m)", "h_gc", "sig");
    for i in (0..curve.len()).step_by(4) {
        let bar_len = (curve.h_granger[i] * 40.0).round() as usize;
        println!(
            "{:>8.3} {:>10.2} {:>8.4} {:>6}   {}",
            curve.frequencies[i],
            curve.period_months[i],
            curve.h_granger[i],
            if curve.significant_granger[i] { "yes" } else { "" },
            "#".repeat(bar_len.min(60))
        );
    }

    let bands = classify_bands(&curve, config.band_split, config.band_min_fraction).unwrap();
    println!(
        "\nlong-term  (lambda <= {:.2}, cycle >= 12 months): {}/{} significant -> {}",
        bands.split,
        bands.long_term.significant,
        bands.long_term.points,
        if bands.long_term.causal { "causal" } else { "not-causal" }
    );
    println!(
        "short-term (lambda  > {:.2}, cycle <  12 months): {}/{} significant -> {}",
        bands.split,
        bands.short_term.significant,
        bands.short_term.points,
        if bands.short_term.causal { "causal" } else { "not-causal" }
    );

    let svg = freqgc::report::render_svg(&curve, "Granger coherence: cause -> effect", 0.52);
    let path = std::env::temp_dir().join("freqgc_granger_curve.svg");
    std::fs::write(&path, svg).unwrap();
    println!("\nSVG written to {}", path.display());
}
