//! Executable form of the estimation-error analysis.
//!
//! With the initial state set to the first measurement, the innovation at
//! step `k` splits exactly into a noise-driven part (a geometrically weighted
//! sum of noise differences) and a signal-driven part (the same weighting of
//! the signal increments). The windowed variance of the innovation then
//! decomposes into `S11 + S22 + 2*S12`, which is both a diagnostic for where
//! an estimate's error comes from and the oracle layer for the property
//! tests: the closed forms here must agree with the recursive filter to
//! machine precision.

use crate::error::{Error, Result};

/// Windowed second-moment decomposition of the innovation variance.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationDecomposition {
    /// Noise-driven innovations over the window (oldest first).
    pub noise_part: Vec<f64>,
    /// Signal-driven innovations over the window (oldest first).
    pub signal_part: Vec<f64>,
    /// Windowed variance of the noise-driven part.
    pub s11: f64,
    /// Windowed variance of the signal-driven part.
    pub s22: f64,
    /// Windowed cross term between the two parts.
    pub s12: f64,
}

impl InnovationDecomposition {
    /// `S11 + S22 + 2*S12`; equals the windowed mean-variance of the summed
    /// innovations exactly.
    pub fn total(&self) -> f64 {
        self.s11 + self.s22 + 2.0 * self.s12
    }
}

/// Closed-form innovation at step `k >= 1`:
///
/// ```text
/// eta_k = (1-K)^(k-1) * x0_residual
///       + sum_{i=1..k} (1-K)^(i-1) * w[k-i]
///       + sum_{i=1..k} (1-K)^(i-1) * dv[k-i]
/// ```
///
/// `w` are the signal increments, `dv` the first differences of the noise,
/// and `x0_residual = y_0 - x_hat_0` (zero under the standard
/// initialisation). Both slices must cover indices `0..k`.
pub fn innovation_closed_form(
    w: &[f64],
    dv: &[f64],
    gain: f64,
    x0_residual: f64,
    k: usize,
) -> Result<f64> {
    if k < 1 {
        return Err(Error::ShortSequence { needed: 1, actual: k });
    }
    if w.len() < k {
        return Err(Error::ShortSequence { needed: k, actual: w.len() });
    }
    if dv.len() < k {
        return Err(Error::ShortSequence { needed: k, actual: dv.len() });
    }
    let beta = 1.0 - gain;
    let mut acc = beta.powi(k as i32 - 1) * x0_residual;
    let mut weight = 1.0;
    for i in 1..=k {
        acc += weight * (w[k - i] + dv[k - i]);
        weight *= beta;
    }
    Ok(acc)
}

/// Noise-driven innovation sequence for indices `0..len`, computed from the
/// noise differences; entry 0 is the zero residual of the initialisation.
pub fn noise_innovation_series(dv: &[f64], gain: f64, len: usize) -> Vec<f64> {
    weighted_series(dv, gain, len)
}

/// Signal-driven innovation sequence for indices `0..len`, computed from the
/// signal increments; entry 0 is zero.
pub fn signal_innovation_series(w: &[f64], gain: f64, len: usize) -> Vec<f64> {
    weighted_series(w, gain, len)
}

// s_k = sum_{i=1..k} (1-K)^(i-1) * src[k-i], evaluated by the equivalent
// one-step recursion s_{k+1} = src[k] + (1-K) * s_k.
fn weighted_series(src: &[f64], gain: f64, len: usize) -> Vec<f64> {
    assert!(
        len == 0 || src.len() >= len - 1,
        "need {} source increments, have {}",
        len - 1,
        src.len()
    );
    let beta = 1.0 - gain;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(0.0);
    let mut acc = 0.0;
    for item in src.iter().take(len - 1) {
        acc = item + beta * acc;
        out.push(acc);
    }
    out
}

/// Noise-driven innovation written directly in terms of the noise samples:
///
/// ```text
/// eta_{k,1} = v[k] - K * sum_{i=1..k-1} (1-K)^(k-1-i) * v[i] - (1-K)^(k-1) * v[0]
/// ```
///
/// Algebraically identical to summing the weighted noise differences; kept
/// as an independent route for the property tests.
pub fn noise_innovation_from_samples(v: &[f64], gain: f64, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::ShortSequence { needed: 1, actual: k });
    }
    if v.len() < k + 1 {
        return Err(Error::ShortSequence { needed: k + 1, actual: v.len() });
    }
    let beta = 1.0 - gain;
    let mut acc = v[k] - beta.powi(k as i32 - 1) * v[0];
    for i in 1..k {
        acc -= gain * beta.powi((k - 1 - i) as i32) * v[i];
    }
    Ok(acc)
}

fn windowed_moments(a: &[f64], b: &[f64], m: usize) -> f64 {
    let n = (m + 1) as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += (x - mean_a) * (y - mean_b);
    }
    acc / m as f64
}

/// Decompose the windowed innovation variance at step `k` (window
/// `k - m ..= k`, requires `k >= m`) into its noise, signal and cross
/// components. Both sequences are indexed by absolute step and must cover
/// the window.
pub fn decompose(
    noise_part: &[f64],
    signal_part: &[f64],
    k: usize,
    m: usize,
) -> Result<InnovationDecomposition> {
    if m < 1 {
        return Err(Error::InvalidWindowLength(m));
    }
    if k < m {
        return Err(Error::ShortSequence { needed: m, actual: k });
    }
    let needed = k + 1;
    if noise_part.len() < needed {
        return Err(Error::ShortSequence { needed, actual: noise_part.len() });
    }
    if signal_part.len() < needed {
        return Err(Error::ShortSequence { needed, actual: signal_part.len() });
    }
    let lo = k - m;
    let a = &noise_part[lo..=k];
    let b = &signal_part[lo..=k];
    Ok(InnovationDecomposition {
        noise_part: a.to_vec(),
        signal_part: b.to_vec(),
        s11: windowed_moments(a, a, m),
        s22: windowed_moments(b, b, m),
        s12: windowed_moments(a, b, m),
    })
}

/// Predicted estimation bias from the signal increments over the window:
/// `(2 - K) / (2m) * sum (w_i - mean)^2` with the mean over the `m + 1`
/// window entries. The vanishing remainder term is dropped.
pub fn predicted_bias(w_window: &[f64], gain: f64, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidWindowLength(m));
    }
    if w_window.len() != m + 1 {
        return Err(Error::WindowLengthMismatch {
            expected: m + 1,
            actual: w_window.len(),
        });
    }
    Ok((2.0 - gain) / 2.0 * windowed_moments(w_window, w_window, m))
}

/// Limiting variance of the noise-driven innovation: `2R / (2 - K)`,
/// identically equal to `(1 + K^2 / (1 - (1-K)^2)) * R`.
pub fn eta1_variance_limit(gain: f64, r_var: f64) -> f64 {
    2.0 * r_var / (2.0 - gain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_is_zero_for_zero_inputs() {
        let w = vec![0.0; 40];
        let dv = vec![0.0; 40];
        for k in 1..40 {
            assert_eq!(innovation_closed_form(&w, &dv, 0.7, 0.0, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_form_first_step_is_plain_sum() {
        let eta = innovation_closed_form(&[0.3], &[-1.2], 0.42, 2.5, 1).unwrap();
        assert!((eta - (2.5 + 0.3 - 1.2)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_rejects_index_shortfall() {
        assert!(matches!(
            innovation_closed_form(&[1.0, 2.0], &[1.0, 2.0, 3.0], 0.5, 0.0, 3),
            Err(Error::ShortSequence { needed: 3, actual: 2 })
        ));
        assert!(innovation_closed_form(&[1.0], &[1.0], 0.5, 0.0, 0).is_err());
    }

    #[test]
    fn series_recursion_matches_literal_sum() {
        let gain = 0.83;
        let src: Vec<f64> = (0..30).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let series = weighted_series(&src, gain, 30);
        let beta = 1.0 - gain;
        for k in 1..30 {
            let literal: f64 = (1..=k).map(|i| beta.powi(i as i32 - 1) * src[k - i]).sum();
            assert!((series[k] - literal).abs() < 1e-12, "k = {}", k);
        }
    }

    #[test]
    fn decompose_degenerate_cases() {
        let m = 4;
        let eta1: Vec<f64> = (0..=m).map(|i| (i as f64 * 1.3).sin()).collect();
        let zeros = vec![0.0; m + 1];

        let d = decompose(&eta1, &zeros, m, m).unwrap();
        assert_eq!(d.s22, 0.0);
        assert_eq!(d.s12, 0.0);
        let c = crate::estimator::windowed_variance_mean(&eta1, m, m).unwrap();
        assert!((d.s11 - c).abs() < 1e-15);

        // eta1 == eta2: every moment coincides and total = 4 * s11.
        let d = decompose(&eta1, &eta1, m, m).unwrap();
        assert_eq!(d.s11, d.s22);
        assert_eq!(d.s11, d.s12);
        assert!((d.total() - 4.0 * d.s11).abs() < 1e-15);
    }

    #[test]
    fn decompose_contract_errors() {
        let xs = vec![0.0; 5];
        assert!(decompose(&xs, &xs, 3, 4).is_err());
        assert!(decompose(&xs, &xs, 6, 4).is_err());
    }

    #[test]
    fn predicted_bias_vanishes_for_constant_increments() {
        let m = 10;
        assert_eq!(predicted_bias(&vec![0.0; m + 1], 0.9902, m).unwrap(), 0.0);
        let b = predicted_bias(&vec![3.7; m + 1], 0.9902, m).unwrap();
        assert!(b.abs() < 1e-12);
        assert!(matches!(
            predicted_bias(&[1.0, 2.0], 0.5, 10),
            Err(Error::WindowLengthMismatch { expected: 11, actual: 2 })
        ));
    }

    #[test]
    fn variance_limit_identities() {
        assert_eq!(eta1_variance_limit(0.5, 0.0), 0.0);
        for &gain in &[0.1, 0.5, 0.9902, 0.999999] {
            let alt = (1.0 + gain * gain / (1.0 - (1.0 - gain) * (1.0 - gain))) * 1.7;
            assert!((eta1_variance_limit(gain, 1.7) - alt).abs() < 1e-12);
        }
        // Gain near one approaches 2R.
        assert!((eta1_variance_limit(1.0 - 1e-9, 1.0) - 2.0).abs() < 1e-8);
        let expected = 2.0 / (2.0 - 0.9902);
        assert!((eta1_variance_limit(0.9902, 1.0) - expected).abs() < 1e-15);
    }
}
