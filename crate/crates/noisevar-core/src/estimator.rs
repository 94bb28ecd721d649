//! Constant-gain predictor and windowed measurement-noise variance estimation.
//!
//! The signal is modelled as a random walk observed through additive white
//! noise. A fixed-gain one-step predictor turns the measurement stream into
//! an innovation sequence; the innovation variance over a moving window is
//! estimated either by the sample variance or by a squared, scaled median
//! absolute deviation, and mapped to the noise variance through
//! `R = C * (1 - K/2)`.

use crate::error::{Error, Result};
use crate::window::RingWindow;
use std::cmp::Ordering;

/// How the innovation variability over the window is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variability {
    /// Sample variance about the window mean.
    MeanVariance,
    /// Squared, scaled sample median absolute deviation. Robust to outliers.
    MadVariance,
}

/// Gaussian-consistency scale for the MAD: 1 / Phi^-1(3/4).
pub const MAD_SCALE_GAUSSIAN: f64 = 1.4826;

/// Alternative MAD scale kept selectable for faithful reproduction of runs
/// that used it; see the README for the discrepancy note.
pub const MAD_SCALE_ALTERNATE: f64 = 1.4268;

/// Tuning parameters of the estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Predictor gain, inside (0, 1) for stability.
    pub gain: f64,
    /// Estimation window length `m`; the window holds up to `m + 1` innovations.
    pub window_len: usize,
    /// MAD scale factor, positive.
    pub mad_scale: f64,
    /// Variability estimator choice.
    pub variability: Variability,
}

impl EstimatorConfig {
    pub fn new(
        gain: f64,
        window_len: usize,
        mad_scale: f64,
        variability: Variability,
    ) -> Result<Self> {
        if !(gain > 0.0 && gain < 1.0) {
            return Err(Error::InvalidGain(gain));
        }
        if window_len < 1 {
            return Err(Error::InvalidWindowLength(window_len));
        }
        if !(mad_scale > 0.0) || !mad_scale.is_finite() {
            return Err(Error::InvalidMadScale(mad_scale));
        }
        Ok(EstimatorConfig {
            gain,
            window_len,
            mad_scale,
            variability,
        })
    }
}

/// Streaming state of the estimator. Single-owner: feed one measurement at a
/// time with [`EstimatorState::step`]; the state can move between threads
/// between steps.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    x_hat: f64,
    window: RingWindow,
    count: usize,
}

impl EstimatorState {
    pub fn new(config: &EstimatorConfig) -> Self {
        EstimatorState {
            x_hat: 0.0,
            window: RingWindow::with_capacity(config.window_len + 1),
            count: 0,
        }
    }

    /// Current posterior estimate of the signal.
    pub fn x_hat(&self) -> f64 {
        self.x_hat
    }

    /// Index of the last processed sample, if any.
    pub fn last_step(&self) -> Option<usize> {
        self.count.checked_sub(1)
    }

    /// Number of values currently held in the innovation window.
    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Innovation window in chronological order, copied into `out`.
    pub fn window_contents(&self, out: &mut Vec<f64>) {
        self.window.copy_ordered(out);
    }

    /// Advance the predictor by one measurement.
    ///
    /// At the first sample the state is initialised to the measurement and no
    /// innovation is produced; the window is seeded with the (zero) residual
    /// of that initialisation so that windows at step `k` always cover
    /// indices `max(0, k - m) ..= k`. From the second sample on, returns the
    /// innovation `y - x_hat_prev` and applies the gain update.
    pub fn step(&mut self, config: &EstimatorConfig, y: f64) -> Result<Option<f64>> {
        if !y.is_finite() {
            return Err(Error::NonFiniteMeasurement { index: self.count });
        }
        if self.count == 0 {
            self.x_hat = y;
            self.window.push(0.0);
            self.count = 1;
            return Ok(None);
        }
        let eta = y - self.x_hat;
        self.x_hat += config.gain * eta;
        self.window.push(eta);
        self.count += 1;
        Ok(Some(eta))
    }
}

fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    assert!(n > 0, "median of empty slice");
    if n == 1 {
        return values[0];
    }
    let mid = n / 2;
    values.select_nth_unstable_by(mid, |a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let upper = values[mid];
    if n % 2 == 1 {
        upper
    } else {
        // Even cardinality: mean of the two middle order statistics.
        let lower = values[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn check_window(window: &[f64], k: usize, m: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::ShortSequence { needed: 1, actual: k });
    }
    let expected = k.min(m) + 1;
    if window.len() != expected {
        return Err(Error::WindowLengthMismatch {
            expected,
            actual: window.len(),
        });
    }
    Ok(())
}

/// Sample variance of the innovation window about its mean.
///
/// The window must hold the innovations for indices `max(0, k - m) ..= k`.
/// The divisor is `m` when `k >= m` and `k` otherwise -- one less than the
/// sample count, kept exactly as specified.
pub fn windowed_variance_mean(window: &[f64], k: usize, m: usize) -> Result<f64> {
    check_window(window, k, m)?;
    let n = window.len();
    let mean = window.iter().sum::<f64>() / n as f64;
    let ss = window.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>();
    let divisor = if k >= m { m } else { k };
    Ok(ss / divisor as f64)
}

/// Squared, scaled median absolute deviation of the innovation window.
///
/// Returns `(a * med{|eta_i - med{eta}|})^2` with medians over the same
/// window as [`windowed_variance_mean`].
pub fn windowed_variance_mad(window: &[f64], k: usize, m: usize, mad_scale: f64) -> Result<f64> {
    check_window(window, k, m)?;
    if !(mad_scale > 0.0) {
        return Err(Error::InvalidMadScale(mad_scale));
    }
    let mut scratch = window.to_vec();
    let med = median_in_place(&mut scratch);
    for v in scratch.iter_mut() {
        *v = (*v - med).abs();
    }
    let mad = median_in_place(&mut scratch);
    let scaled = mad_scale * mad;
    Ok(scaled * scaled)
}

/// Map an innovation-variance estimate to the measurement-noise variance:
/// `R = C * (1 - K/2)`.
pub fn estimate_r(c_hat: f64, gain: f64) -> Result<f64> {
    if c_hat < 0.0 || !c_hat.is_finite() {
        return Err(Error::NegativeVariance(c_hat));
    }
    if !(gain > 0.0 && gain < 1.0) {
        return Err(Error::InvalidGain(gain));
    }
    Ok(c_hat * (1.0 - gain / 2.0))
}

/// One per-step output row of the estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    /// Time index of the measurement (no record is emitted at k = 0).
    pub k: usize,
    /// The measurement itself.
    pub y: f64,
    /// Innovation at this step.
    pub eta: f64,
    /// Innovation-variance estimate over the window.
    pub c_hat: f64,
    /// Measurement-noise variance estimate.
    pub r_hat: f64,
    /// Process-noise estimate; only the correlation baselines produce one.
    pub q_hat: Option<f64>,
    /// True while the window is still partially filled (k < m).
    pub warmup: bool,
    /// A negative least-squares solution was clipped to zero (baselines only).
    pub clipped: bool,
    /// The per-step fit could not be performed (baselines only).
    pub fit_failed: bool,
}

/// Run the full estimation algorithm over a measurement stream.
///
/// Emits one record per step `k >= 1`; the first sample only initialises the
/// state. Deterministic: the same stream and configuration produce identical
/// output.
pub fn run_algorithm1(stream: &[f64], config: &EstimatorConfig) -> Result<Vec<EstimateRecord>> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut state = EstimatorState::new(config);
    let mut records = Vec::with_capacity(stream.len().saturating_sub(1));
    let mut window = Vec::with_capacity(config.window_len + 1);
    for (k, &y) in stream.iter().enumerate() {
        let eta = match state.step(config, y)? {
            Some(eta) => eta,
            None => continue,
        };
        state.window_contents(&mut window);
        let c_hat = match config.variability {
            Variability::MeanVariance => windowed_variance_mean(&window, k, config.window_len)?,
            Variability::MadVariance => {
                windowed_variance_mad(&window, k, config.window_len, config.mad_scale)?
            }
        };
        let r_hat = estimate_r(c_hat, config.gain)?;
        records.push(EstimateRecord {
            k,
            y,
            eta,
            c_hat,
            r_hat,
            q_hat: None,
            warmup: k < config.window_len,
            clipped: false,
            fit_failed: false,
        });
    }
    Ok(records)
}
