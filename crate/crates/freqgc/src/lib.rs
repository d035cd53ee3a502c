//! Frequency-by-frequency Granger causality testing for monthly time series.
//!
//! The pipeline: unit-root pre-tests (ADF and Phillips-Perron), ARMA
//! prewhitening to innovation series, Bartlett-weighted spectral and
//! cross-spectral estimation, the Granger coefficient of coherence with its
//! chi-squared significance threshold, and a long-term/short-term verdict
//! from the per-frequency significance pattern.
//!
//! Start from [`pipeline::run_pipeline`] for the end-to-end analysis of two
//! dated series, [`spectral::gc_curve`] for the test itself on already
//! whitened data, or [`synthetic::mc_study`] for size/power calibration.
//! The `examples/` directory has one runnable example per capability; the
//! `freqgc` binary exposes the same pipeline as `unitroot`, `test`, and `mc`
//! subcommands.

pub mod config;
pub mod error;
mod optimize;
pub mod pipeline;
pub mod prewhiten;
pub mod regression;
pub mod report;
pub mod series;
pub mod spectral;
pub mod stationarity;
pub mod synthetic;

pub use config::{Direction, LagTruncation, SpectralConfig};
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, GcReport};
pub use report::emit_report;
pub use series::{align, load_csv, CsvSpec, DateFormat, Month, TimeSeries};
pub use spectral::{
    classify_bands, coherence, cross_spectrum, gc_curve, granger_coherence, spectrum,
    CoherenceCurve, LagMask, WeightScheme,
};
pub use synthetic::{mc_study, mc_study_at, McSummary, TransferGenerator};
