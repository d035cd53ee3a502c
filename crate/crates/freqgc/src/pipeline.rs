//! End-to-end orchestration: unit-root checks, prewhitening, coherence
//! curves, and band classification for a pair of monthly series.

use crate::config::{Direction, SpectralConfig};
use crate::error::{Error, Result};
use crate::prewhiten::{self, ArmaModel};
use crate::series::{align, TimeSeries};
use crate::spectral::{self, BandSummary, CoherenceCurve, EffectiveSampleSizes, WeightScheme};
use crate::stationarity::{self, AdfResult, PpResult, TrendSpec};

/// Unit-root results for one series under both deterministic-term choices.
#[derive(Debug, Clone)]
pub struct UnitRootPanel {
    pub adf_constant: AdfResult,
    pub adf_trend: AdfResult,
    pub pp_constant: PpResult,
    pub pp_trend: PpResult,
}

impl UnitRootPanel {
    pub fn run(series: &[f64], max_lag: usize, alpha: f64) -> Result<UnitRootPanel> {
        Ok(UnitRootPanel {
            adf_constant: stationarity::adf_test(series, TrendSpec::ConstantOnly, max_lag, alpha)?,
            adf_trend: stationarity::adf_test(series, TrendSpec::ConstantTrend, max_lag, alpha)?,
            pp_constant: stationarity::pp_test(series, TrendSpec::ConstantOnly, alpha)?,
            pp_trend: stationarity::pp_test(series, TrendSpec::ConstantTrend, alpha)?,
        })
    }

    /// The workflow expectation is rejection at the 5% level for the
    /// intercept-only specification by both tests.
    pub fn rejects_unit_root(&self) -> bool {
        self.adf_constant.reject_unit_root_5pct && self.pp_constant.reject_unit_root_5pct
    }
}

/// One tested causal direction with its curve and band verdicts.
#[derive(Debug, Clone)]
pub struct DirectionResult {
    pub cause_name: String,
    pub effect_name: String,
    pub curve: CoherenceCurve,
    pub bands: BandSummary,
}

/// Description of one ingested input file.
#[derive(Debug, Clone)]
pub struct InputFile {
    pub path: String,
    pub column: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub inputs: Vec<InputFile>,
    pub version: String,
    pub config_echo: String,
}

/// Full pipeline result.
#[derive(Debug, Clone)]
pub struct GcReport {
    pub x_name: String,
    pub y_name: String,
    /// Aligned sample length.
    pub t: usize,
    pub sample_start: String,
    pub sample_end: String,
    pub unit_roots_x: UnitRootPanel,
    pub unit_roots_y: UnitRootPanel,
    pub arma_x: ArmaModel,
    pub arma_y: ArmaModel,
    pub sizes: EffectiveSampleSizes,
    pub directions: Vec<DirectionResult>,
    pub warnings: Vec<String>,
    pub band_split: f64,
    pub alpha: f64,
    pub provenance: Provenance,
}

const MIN_PIPELINE_LEN: usize = 100;
const WARN_PIPELINE_LEN: usize = 200;

fn config_echo(config: &SpectralConfig, m: usize) -> String {
    let fmt_order = |o: &Option<(usize, usize)>| match o {
        Some((p, q)) => format!("({p},{q})"),
        None => "auto".to_string(),
    };
    format!(
        "alpha={} M={} grid={} band_split={} band_min_fraction={} arma_x={} arma_y={} direction={:?}",
        config.alpha,
        m,
        config.grid_size,
        config.band_split,
        config.band_min_fraction,
        fmt_order(&config.arma_x),
        fmt_order(&config.arma_y),
        config.direction,
    )
}

/// Run the whole analysis on a pair of monthly series.
///
/// The series are aligned to their common date range; unit-root failures at
/// the 5% level produce warnings rather than aborting, since the caller may
/// be intentionally feeding differenced data.
pub fn run_pipeline(x: &TimeSeries, y: &TimeSeries, config: &SpectralConfig) -> Result<GcReport> {
    let (x, y) = align(x, y)?;
    let t = x.len();
    if t < MIN_PIPELINE_LEN {
        return Err(Error::SeriesTooShort {
            len: t,
            min: MIN_PIPELINE_LEN,
        });
    }
    config.validate(t)?;
    let mut warnings: Vec<String> = Vec::new();
    if t < WARN_PIPELINE_LEN {
        warnings.push(format!(
            "aligned sample has only {t} observations; results may be fragile below {WARN_PIPELINE_LEN}"
        ));
    }

    let max_lag = stationarity::default_max_lag(t);
    let unit_roots_x = UnitRootPanel::run(x.values(), max_lag, 0.05)?;
    let unit_roots_y = UnitRootPanel::run(y.values(), max_lag, 0.05)?;
    for (name, panel) in [(x.name(), &unit_roots_x), (y.name(), &unit_roots_y)] {
        if !panel.rejects_unit_root() {
            warnings.push(format!(
                "'{name}' does not reject a unit root at the 5% level (ADF {:.3}, PP {:.3}); \
                 the coherence test assumes stationary inputs",
                panel.adf_constant.statistic, panel.pp_constant.statistic
            ));
        }
    }

    let whiten = |series: &TimeSeries,
                  order: Option<(usize, usize)>|
     -> Result<(ArmaModel, Vec<f64>)> {
        let (p, q) = match order {
            Some(pq) => pq,
            None => prewhiten::select_arma_order(series.values(), 4, 4)?,
        };
        let model = prewhiten::fit_arma(series.values(), p, q)?;
        let innovations = prewhiten::innovations(series.values(), &model)?;
        Ok((model, innovations.values))
    };
    let (arma_x, innov_x) = whiten(&x, config.arma_x)?;
    let (arma_y, innov_y) = whiten(&y, config.arma_y)?;
    for (name, model) in [(x.name(), &arma_x), (y.name(), &arma_y)] {
        if model.near_unit_root() {
            warnings.push(format!(
                "fitted ARMA({},{}) for '{name}' is close to the stationarity boundary",
                model.p, model.q
            ));
        }
    }

    let m = config.truncation.resolve(t);
    let scheme = WeightScheme::bartlett(m)?;
    let sizes = spectral::effective_sample_sizes(t, &scheme)?;
    let grid = spectral::default_grid(config.grid_size);

    let mut directions = Vec::new();
    let mut push_direction = |cause: &TimeSeries,
                              cause_innov: &[f64],
                              effect: &TimeSeries,
                              effect_innov: &[f64]|
     -> Result<()> {
        let curve = spectral::gc_curve_at(cause_innov, effect_innov, &grid, &scheme, config.alpha)?;
        let bands = spectral::classify_bands(&curve, config.band_split, config.band_min_fraction)?;
        directions.push(DirectionResult {
            cause_name: cause.name().to_string(),
            effect_name: effect.name().to_string(),
            curve,
            bands,
        });
        Ok(())
    };
    match config.direction {
        Direction::XToY => push_direction(&x, &innov_x, &y, &innov_y)?,
        Direction::YToX => push_direction(&y, &innov_y, &x, &innov_x)?,
        Direction::Both => {
            push_direction(&x, &innov_x, &y, &innov_y)?;
            push_direction(&y, &innov_y, &x, &innov_x)?;
        }
    }

    Ok(GcReport {
        x_name: x.name().to_string(),
        y_name: y.name().to_string(),
        t,
        sample_start: x.start().to_string(),
        sample_end: x.end().to_string(),
        unit_roots_x,
        unit_roots_y,
        arma_x,
        arma_y,
        sizes,
        directions,
        warnings,
        band_split: config.band_split,
        alpha: config.alpha,
        provenance: Provenance {
            inputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_echo: config_echo(config, m),
        },
    })
}
