//! Run configuration shared by the curve estimator, the Monte Carlo harness,
//! and the pipeline.

use crate::error::{Error, Result};

/// Truncation lag for the Bartlett window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagTruncation {
    /// `M = round(sqrt(T))`.
    Auto,
    Fixed(usize),
}

impl LagTruncation {
    pub fn resolve(&self, t: usize) -> usize {
        match self {
            LagTruncation::Auto => (t as f64).sqrt().round() as usize,
            LagTruncation::Fixed(m) => *m,
        }
    }
}

/// Which causal direction(s) to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    XToY,
    YToX,
    Both,
}

#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Significance level of the pointwise tests.
    pub alpha: f64,
    pub truncation: LagTruncation,
    /// Number of interior grid frequencies `j pi / (grid_size + 1)`.
    pub grid_size: usize,
    /// Long-term/short-term boundary frequency (long-term inclusive).
    pub band_split: f64,
    /// A band is called causal when more than this fraction of its grid
    /// points is significant.
    pub band_min_fraction: f64,
    /// Fixed ARMA orders per series; `None` selects by BIC over a 0..=4 grid.
    pub arma_x: Option<(usize, usize)>,
    pub arma_y: Option<(usize, usize)>,
    pub direction: Direction,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            alpha: 0.05,
            truncation: LagTruncation::Auto,
            grid_size: 256,
            band_split: 0.52,
            band_min_fraction: 0.5,
            arma_x: None,
            arma_y: None,
            direction: Direction::XToY,
        }
    }
}

impl SpectralConfig {
    /// Check the configuration against a concrete series length.
    pub fn validate(&self, t: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        let m = self.truncation.resolve(t);
        if m < 2 || 2 * m >= t {
            return Err(Error::InvalidConfig(format!(
                "truncation lag {m} must satisfy 2 <= M < T/2 for T = {t}"
            )));
        }
        if self.grid_size == 0 {
            return Err(Error::InvalidConfig("grid size must be positive".into()));
        }
        if !(self.band_split > 0.0 && self.band_split < std::f64::consts::PI) {
            return Err(Error::InvalidConfig(format!(
                "band split {} outside (0, pi)",
                self.band_split
            )));
        }
        if !(0.0..1.0).contains(&self.band_min_fraction) {
            return Err(Error::InvalidConfig(format!(
                "band fraction threshold {} outside [0, 1)",
                self.band_min_fraction
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_truncation_is_rounded_sqrt() {
        assert_eq!(LagTruncation::Auto.resolve(603), 25);
        assert_eq!(LagTruncation::Auto.resolve(600), 24);
        assert_eq!(LagTruncation::Auto.resolve(2000), 45);
        assert_eq!(LagTruncation::Fixed(24).resolve(603), 24);
    }

    #[test]
    fn validation_bounds() {
        let mut cfg = SpectralConfig::default();
        assert!(cfg.validate(600).is_ok());
        cfg.alpha = 0.0;
        assert!(cfg.validate(600).is_err());
        cfg.alpha = 0.05;
        cfg.truncation = LagTruncation::Fixed(300);
        assert!(cfg.validate(600).is_err());
        cfg.truncation = LagTruncation::Auto;
        cfg.band_split = 4.0;
        assert!(cfg.validate(600).is_err());
    }
}
