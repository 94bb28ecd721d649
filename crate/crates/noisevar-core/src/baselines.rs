//! Scalar correlation-method baselines.
//!
//! Both baselines match the sample autocovariances of the innovation
//! sequence to their steady-state model values by least squares. For the
//! scalar random-walk system with a fixed gain `K` the model is
//!
//! ```text
//! C_0 = M + R
//! C_j = (1 - K)^(j-1) * ((1 - K) * M - K * R),   j >= 1
//! M   = (K^2 * R + Q) / (2K - K^2)
//! ```
//!
//! One fit solves for `(M, R)` and recovers `Q` from the steady-state
//! identity; the other eliminates `M` and solves for `(Q, R)` directly.
//! The lag-`j` formula above extends the published `j = 0` case; it is
//! validated against a Monte Carlo oracle in the test suite before the
//! comparison results are trusted.

use crate::error::{Error, Result};
use crate::estimator::{EstimateRecord, EstimatorConfig, EstimatorState};

/// Sample autocovariances of an innovation window at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagCovariances {
    /// `c[j]` is the sample autocovariance at lag `j`.
    pub c: Vec<f64>,
    /// Number of innovation samples the window held.
    pub n: usize,
}

impl LagCovariances {
    pub fn max_lag(&self) -> usize {
        self.c.len() - 1
    }
}

/// Result of a least-squares baseline fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineEstimate {
    /// Process-noise variance estimate, clipped at zero.
    pub q_hat: f64,
    /// Measurement-noise variance estimate, clipped at zero.
    pub r_hat: f64,
    /// Euclidean norm of the least-squares residual (before clipping).
    pub residual: f64,
    /// The unconstrained solution was negative in `q_hat`.
    pub q_clipped: bool,
    /// The unconstrained solution was negative in `r_hat`.
    pub r_clipped: bool,
}

/// Which baseline parameterization to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    /// Fit `(M, R)` to the lag equations, then derive `Q`.
    Mehra,
    /// Autocovariance least squares: eliminate `M`, fit `(Q, R)` directly.
    Als,
}

/// Sample autocovariances `c[j] = (1/n) * sum_i (e_i - mean)(e_{i+j} - mean)`
/// for `j = 0..=max_lag`, with the mean taken over the whole window and the
/// biased `1/n` normalization (keeps the lag sequence positive semidefinite).
pub fn innovation_autocovariance(eta: &[f64], max_lag: usize) -> Result<LagCovariances> {
    if max_lag < 1 {
        return Err(Error::InvalidLagCount(max_lag));
    }
    let n = eta.len();
    if n < max_lag + 2 {
        return Err(Error::ShortSequence {
            needed: max_lag + 2,
            actual: n,
        });
    }
    let mean = eta.iter().sum::<f64>() / n as f64;
    let mut c = Vec::with_capacity(max_lag + 1);
    for j in 0..=max_lag {
        let mut acc = 0.0;
        for i in 0..n - j {
            acc += (eta[i] - mean) * (eta[i + j] - mean);
        }
        c.push(acc / n as f64);
    }
    Ok(LagCovariances { c, n })
}

/// Steady-state innovation autocovariance of the fixed-gain filter at lag
/// `j`, given the estimation-error variance `M` and noise variance `R`.
pub fn theoretical_lag_model(gain: f64, m_var: f64, r_var: f64, lag: usize) -> f64 {
    if lag == 0 {
        m_var + r_var
    } else {
        (1.0 - gain).powi(lag as i32 - 1) * ((1.0 - gain) * m_var - gain * r_var)
    }
}

/// Steady-state estimation-error variance for given `(Q, R)` and gain.
pub fn steady_state_error_variance(gain: f64, q_var: f64, r_var: f64) -> f64 {
    (gain * gain * r_var + q_var) / (2.0 * gain - gain * gain)
}

/// Steady-state innovation variance `C = (Q + 2KR) / (2K - K^2)`.
pub fn steady_state_innovation_variance(gain: f64, q_var: f64, r_var: f64) -> f64 {
    (q_var + 2.0 * gain * r_var) / (2.0 * gain - gain * gain)
}

/// Solve the 2-unknown least-squares problem `rows * theta ~ rhs` by normal
/// equations. Returns `(theta, residual_norm)`.
fn solve_two_column(rows: &[[f64; 2]], rhs: &[f64]) -> Result<([f64; 2], f64)> {
    let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
    let (mut b1, mut b2) = (0.0, 0.0);
    for (row, &y) in rows.iter().zip(rhs) {
        a11 += row[0] * row[0];
        a12 += row[0] * row[1];
        a22 += row[1] * row[1];
        b1 += row[0] * y;
        b2 += row[1] * y;
    }
    let det = a11 * a22 - a12 * a12;
    let scale = a11.abs().max(a22.abs());
    if det.abs() <= 1e-12 * scale * scale || scale == 0.0 {
        return Err(Error::SingularFit);
    }
    let theta = [(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det];
    let mut ss = 0.0;
    for (row, &y) in rows.iter().zip(rhs) {
        let r = row[0] * theta[0] + row[1] * theta[1] - y;
        ss += r * r;
    }
    Ok((theta, ss.sqrt()))
}

fn clip(value: f64) -> (f64, bool) {
    if value < 0.0 {
        (0.0, true)
    } else {
        (value, false)
    }
}

fn check_fit_inputs(lags: &LagCovariances, gain: f64) -> Result<()> {
    if lags.max_lag() < 1 {
        return Err(Error::InvalidLagCount(lags.max_lag()));
    }
    if !(gain > 0.0 && gain < 1.0) {
        return Err(Error::InvalidGain(gain));
    }
    Ok(())
}

/// Least-squares fit of `(M, R)` to the lag equations, with
/// `Q = M * (2K - K^2) - K^2 * R` recovered from the steady state.
pub fn fit_mehra(lags: &LagCovariances, gain: f64) -> Result<BaselineEstimate> {
    check_fit_inputs(lags, gain)?;
    let beta = 1.0 - gain;
    let mut rows = vec![[1.0, 1.0]];
    for j in 1..=lags.max_lag() {
        let decay = beta.powi(j as i32 - 1);
        rows.push([decay * beta, -decay * gain]);
    }
    let (theta, residual) = solve_two_column(&rows, &lags.c)?;
    let (m_hat, r_raw) = (theta[0], theta[1]);
    let q_raw = m_hat * (2.0 * gain - gain * gain) - gain * gain * r_raw;
    let (q_hat, q_clipped) = clip(q_raw);
    let (r_hat, r_clipped) = clip(r_raw);
    Ok(BaselineEstimate {
        q_hat,
        r_hat,
        residual,
        q_clipped,
        r_clipped,
    })
}

/// Autocovariance least squares: each model lag written as a linear function
/// of `(Q, R)` by substituting the steady-state `M`, then solved directly.
pub fn fit_als(lags: &LagCovariances, gain: f64) -> Result<BaselineEstimate> {
    check_fit_inputs(lags, gain)?;
    let beta = 1.0 - gain;
    let denom = 2.0 * gain - gain * gain;
    // C_0 = Q / denom + 2K R / denom; C_j = decay * (beta Q - K^2 R) / denom.
    let mut rows = vec![[1.0 / denom, 2.0 * gain / denom]];
    for j in 1..=lags.max_lag() {
        let decay = beta.powi(j as i32 - 1);
        rows.push([decay * beta / denom, -decay * gain * gain / denom]);
    }
    let (theta, residual) = solve_two_column(&rows, &lags.c)?;
    let (q_hat, q_clipped) = clip(theta[0]);
    let (r_hat, r_clipped) = clip(theta[1]);
    Ok(BaselineEstimate {
        q_hat,
        r_hat,
        residual,
        q_clipped,
        r_clipped,
    })
}

/// Run a correlation baseline over a measurement stream.
///
/// Shares the innovation generation with the main estimator: the same
/// fixed-gain filter produces the innovations, and the fit runs on the same
/// moving window each step. Fit errors (window still shorter than
/// `max_lag + 2`, singular equations) produce flagged records rather than
/// aborting the run.
pub fn run_baseline(
    stream: &[f64],
    config: &EstimatorConfig,
    method: BaselineMethod,
    max_lag: usize,
) -> Result<Vec<EstimateRecord>> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    if max_lag < 1 {
        return Err(Error::InvalidLagCount(max_lag));
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
        let mut record = EstimateRecord {
            k,
            y,
            eta,
            c_hat: 0.0,
            r_hat: 0.0,
            q_hat: Some(0.0),
            warmup: k < config.window_len,
            clipped: false,
            fit_failed: false,
        };
        match innovation_autocovariance(&window, max_lag) {
            Ok(lags) => {
                record.c_hat = lags.c[0];
                let fit = match method {
                    BaselineMethod::Mehra => fit_mehra(&lags, config.gain),
                    BaselineMethod::Als => fit_als(&lags, config.gain),
                };
                match fit {
                    Ok(est) => {
                        record.r_hat = est.r_hat;
                        record.q_hat = Some(est.q_hat);
                        record.clipped = est.q_clipped || est.r_clipped;
                    }
                    Err(_) => record.fit_failed = true,
                }
            }
            Err(_) => {
                // Window not yet long enough for the requested lags.
                record.fit_failed = true;
            }
        }
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::Variability;

    fn exact_lags(gain: f64, m_var: f64, r_var: f64, max_lag: usize) -> LagCovariances {
        let c = (0..=max_lag)
            .map(|j| theoretical_lag_model(gain, m_var, r_var, j))
            .collect();
        LagCovariances { c, n: 1000 }
    }

    #[test]
    fn constant_sequence_has_zero_autocovariance() {
        let lags = innovation_autocovariance(&[1.0, 1.0, 1.0, 1.0], 2).unwrap();
        assert!(lags.c.iter().all(|&c| c == 0.0));
        assert_eq!(lags.n, 4);
    }

    #[test]
    fn alternating_sequence_lag_one() {
        let eta: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let lags = innovation_autocovariance(&eta, 1).unwrap();
        assert!((lags.c[0] - 1.0).abs() < 1e-12);
        // c1 = -99/100 for the alternating sequence with zero mean
        assert!(lags.c[1] < -0.9);
        assert!((lags.c[1] + 0.99).abs() < 1e-12);
    }

    #[test]
    fn autocovariance_rejects_short_windows() {
        assert!(matches!(
            innovation_autocovariance(&[1.0, 2.0], 1),
            Err(Error::ShortSequence { needed: 3, actual: 2 })
        ));
        assert!(matches!(
            innovation_autocovariance(&[1.0, 2.0, 3.0], 0),
            Err(Error::InvalidLagCount(0))
        ));
    }

    #[test]
    fn lag_model_published_case_and_whiteness() {
        assert_eq!(theoretical_lag_model(0.5, 2.0, 1.0, 0), 3.0);
        // At the optimal gain K = M / (M + R) every lag j >= 1 vanishes.
        for &(m_var, r_var) in &[(2.0, 1.0), (0.3, 0.7), (5.0, 0.01)] {
            let k_opt = m_var / (m_var + r_var);
            for j in 1..=6 {
                assert!(theoretical_lag_model(k_opt, m_var, r_var, j).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fit_inverts_exact_model_lags() {
        let lags = exact_lags(0.5, 2.0, 1.0, 4);
        for fit in [fit_mehra(&lags, 0.5).unwrap(), fit_als(&lags, 0.5).unwrap()] {
            assert!((fit.r_hat - 1.0).abs() < 1e-9, "r_hat = {}", fit.r_hat);
            assert!((fit.q_hat - 1.25).abs() < 1e-9, "q_hat = {}", fit.q_hat);
            assert!(fit.residual < 1e-9);
            assert!(!fit.q_clipped && !fit.r_clipped);
        }
    }

    #[test]
    fn all_zero_lags_fit_to_zero() {
        let lags = LagCovariances { c: vec![0.0; 5], n: 500 };
        for fit in [fit_mehra(&lags, 0.9902).unwrap(), fit_als(&lags, 0.9902).unwrap()] {
            assert_eq!(fit.q_hat, 0.0);
            assert_eq!(fit.r_hat, 0.0);
        }
    }

    #[test]
    fn negative_solutions_are_clipped_and_flagged() {
        // A strongly positive lag-1 covariance drives the unconstrained R
        // negative for gains near one.
        let lags = LagCovariances {
            c: vec![1.0, 0.9, 0.0, 0.0, 0.0],
            n: 500,
        };
        let fit = fit_mehra(&lags, 0.9902).unwrap();
        assert_eq!(fit.r_hat, 0.0);
        assert!(fit.r_clipped);
    }

    #[test]
    fn constant_noiseless_stream_estimates_zero() {
        let config =
            EstimatorConfig::new(0.9902, 100, 1.4826, Variability::MadVariance).unwrap();
        let stream = vec![2.0; 400];
        for method in [BaselineMethod::Mehra, BaselineMethod::Als] {
            let records = run_baseline(&stream, &config, method, 4).unwrap();
            assert_eq!(records.len(), 399);
            for r in &records {
                assert_eq!(r.r_hat, 0.0);
                assert_eq!(r.q_hat, Some(0.0));
            }
        }
    }

    #[test]
    fn early_steps_are_flagged_until_window_covers_lags() {
        let config = EstimatorConfig::new(0.5, 100, 1.0, Variability::MeanVariance).unwrap();
        let stream: Vec<f64> = (0..20).map(|i| (i as f64 * 0.7).sin()).collect();
        let records = run_baseline(&stream, &config, BaselineMethod::Als, 4).unwrap();
        // Window holds k + 1 values at step k; the fit needs max_lag + 2 = 6.
        for r in &records {
            assert_eq!(r.fit_failed, r.k + 1 < 6, "at k = {}", r.k);
        }
    }
}
