//! Streaming estimation of measurement-noise variance on 1-D time-varying
//! signals.
//!
//! A constant-gain one-step predictor converts the measurement stream into
//! innovations; a moving-window variability estimate of the innovations
//! (sample variance, or a robust squared median absolute deviation) maps to
//! the noise variance through a closed-form factor. The crate also ships the
//! two classic correlation-method baselines in their scalar form, the
//! innovation decomposition used to analyse estimation bias under signal
//! motion, and a deterministic synthetic-scenario generator.

pub mod analysis;
pub mod baselines;
pub mod error;
pub mod estimator;
pub mod signal;
pub mod window;

pub use analysis::{
    decompose, eta1_variance_limit, innovation_closed_form, noise_innovation_from_samples,
    noise_innovation_series, predicted_bias, signal_innovation_series, InnovationDecomposition,
};
pub use baselines::{
    fit_als, fit_mehra, innovation_autocovariance, run_baseline, steady_state_error_variance,
    steady_state_innovation_variance, theoretical_lag_model, BaselineEstimate, BaselineMethod,
    LagCovariances,
};
pub use error::{Error, Result};
pub use estimator::{
    estimate_r, run_algorithm1, windowed_variance_mad, windowed_variance_mean, EstimateRecord,
    EstimatorConfig, EstimatorState, Variability, MAD_SCALE_ALTERNATE, MAD_SCALE_GAUSSIAN,
};
pub use signal::{
    default_section5_spec, generate, parse_scenario, render_scenario, NoiseLevel, Outlier,
    ScenarioData, ScenarioSpec, Segment, SegmentKind,
};
