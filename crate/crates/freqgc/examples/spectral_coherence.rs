//! Spectra, cross-spectra, and coherence of a lag-coupled pair, against
//! their closed-form population values.
//!
//! ```text
//! cargo run --release --example spectral_coherence
//! ```

use std::f64::consts::PI;

use freqgc::spectral::{coherence, cross_spectrum, granger_coherence, spectrum, LagMask, WeightScheme};
use freqgc::synthetic::TransferGenerator;

fn main() {
    // effect_t = cause_{t-1} + noise_t with unit variances: the population
    // Granger coherence is 1/sqrt(2) ~ 0.7071 at every frequency.
    let gen = TransferGenerator::lagged(&[1.0], 2000, 99);
    let (cause, effect) = gen.generate().unwrap();
    let (x, y) = (cause.values(), effect.values());
    let scheme = WeightScheme::bartlett(45).unwrap();

    println!("T = 2000, Bartlett M = 45");
    println!(
        "{:>8} {:>10} {:>10} {:>12} {:>10} {:>10} {:>10}",
        "lambda", "S_x", "S_y", "|S_xy|", "h_full", "h_gc", "pop h_gc"
    );
    for j in 1..=7 {
        let lambda = j as f64 * PI / 8.0;
        let sx = spectrum(x, &scheme, lambda).unwrap();
        let sy = spectrum(y, &scheme, lambda).unwrap();
        let sxy = cross_spectrum(x, y, &scheme, lambda, LagMask::Full).unwrap();
        let h = coherence(x, y, &scheme, lambda).unwrap();
        let g = granger_coherence(x, y, &scheme, lambda).unwrap();
        println!(
            "{:>8.4} {:>10.4} {:>10.4} {:>12.4} {:>10.4} {:>10.4} {:>10.4}",
            lambda,
            sx,
            sy,
            sxy.norm(),
            h,
            g,
            gen.population_granger_coherence(lambda).unwrap()
        );
    }
    println!("\nwhite-noise reference: S = 1/(2 pi) = {:.4}", 1.0 / (2.0 * PI));

    // The mask decomposition: instantaneous + backward + forward = full.
    let lambda = PI / 3.0;
    let full = cross_spectrum(x, y, &scheme, lambda, LagMask::Full).unwrap();
    let inst = cross_spectrum(x, y, &scheme, lambda, LagMask::Instantaneous).unwrap();
    let neg = cross_spectrum(x, y, &scheme, lambda, LagMask::NegativeLags).unwrap();
    let pos = cross_spectrum(x, y, &scheme, lambda, LagMask::PositiveLags).unwrap();
    println!("\ncross-spectrum decomposition at lambda = pi/3:");
    println!("  instantaneous {:+.5} {:+.5}i", inst.re, inst.im);
    println!("  x leads y     {:+.5} {:+.5}i   <- the causal part", neg.re, neg.im);
    println!("  y leads x     {:+.5} {:+.5}i", pos.re, pos.im);
    println!("  residual (full - sum) = {:.2e}", (full - (inst + neg + pos)).norm());
}
