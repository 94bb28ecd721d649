//! Deterministic synthetic-scenario generation.
//!
//! A scenario is a piecewise description of a 1-D signal (constant holds,
//! ramped steps, phase-continuous chirps) plus a piecewise-constant noise
//! standard deviation and optional additive measurement outliers. Generation
//! is a pure function of the specification: the same spec and seed always
//! produce bit-identical samples.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const TILE_EPS: f64 = 1e-9;

/// Shape of one signal segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    /// Hold a fixed level.
    Constant { level: f64 },
    /// Move from `from` to `to` linearly over `ramp` seconds, then hold.
    /// `ramp = 0` jumps immediately.
    Step { from: f64, to: f64, ramp: f64 },
    /// Oscillation around `center` with accumulated phase. The instantaneous
    /// frequency rises linearly from `f_start` to `f_peak` over the first
    /// half of the segment and falls back to `f_end` over the second half.
    Chirp {
        center: f64,
        amplitude: f64,
        f_start: f64,
        f_peak: f64,
        f_end: f64,
    },
}

/// One signal segment over `[start, end)` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub kind: SegmentKind,
}

/// Noise standard deviation from `start` seconds onward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseLevel {
    pub start: f64,
    pub std: f64,
}

/// Additive spike on the measurement at `time` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outlier {
    pub time: f64,
    pub magnitude: f64,
}

/// Complete scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub sample_rate: f64,
    pub duration: f64,
    pub segments: Vec<Segment>,
    pub noise_profile: Vec<NoiseLevel>,
    pub outliers: Vec<Outlier>,
    pub seed: u64,
}

/// Generated samples: true signal, measurement, and true noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub r_true: Vec<f64>,
}

impl ScenarioSpec {
    /// Number of samples the scenario produces.
    pub fn sample_count(&self) -> usize {
        (self.duration * self.sample_rate).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: String| Err(Error::InvalidScenario { field, reason });

        if !(self.sample_rate > 0.0) || !self.sample_rate.is_finite() {
            return bad("sample_rate", format!("{} must be positive", self.sample_rate));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return bad("duration", format!("{} must be positive", self.duration));
        }
        if self.sample_count() < 1 {
            return bad("duration", "scenario produces no samples".into());
        }
        if self.segments.is_empty() {
            return bad("segments", "at least one segment is required".into());
        }
        let nyquist = self.sample_rate / 2.0;
        let mut cursor = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if (seg.start - cursor).abs() > TILE_EPS {
                return bad(
                    "segments",
                    format!("segment {} starts at {} but previous ends at {}", i, seg.start, cursor),
                );
            }
            if !(seg.end > seg.start) {
                return bad("segments", format!("segment {} has end <= start", i));
            }
            match seg.kind {
                SegmentKind::Constant { level } => {
                    if !level.is_finite() {
                        return bad("level", format!("segment {} level not finite", i));
                    }
                }
                SegmentKind::Step { from, to, ramp } => {
                    if !from.is_finite() || !to.is_finite() {
                        return bad("step", format!("segment {} endpoints not finite", i));
                    }
                    if !(ramp >= 0.0) || ramp > seg.end - seg.start {
                        return bad(
                            "ramp",
                            format!("segment {} ramp {} outside [0, {}]", i, ramp, seg.end - seg.start),
                        );
                    }
                }
                SegmentKind::Chirp { center, amplitude, f_start, f_peak, f_end } => {
                    if !center.is_finite() || !(amplitude >= 0.0) || !amplitude.is_finite() {
                        return bad("chirp", format!("segment {} center/amplitude invalid", i));
                    }
                    for (name, f) in [("f_start", f_start), ("f_peak", f_peak), ("f_end", f_end)] {
                        if !(f > 0.0 && f < nyquist) {
                            return bad(
                                "frequency",
                                format!("segment {} {} = {} outside (0, {})", i, name, f, nyquist),
                            );
                        }
                    }
                }
            }
            cursor = seg.end;
        }
        if (cursor - self.duration).abs() > TILE_EPS {
            return bad(
                "segments",
                format!("segments end at {} but duration is {}", cursor, self.duration),
            );
        }
        if self.noise_profile.is_empty() {
            return bad("noise", "at least one noise level is required".into());
        }
        if self.noise_profile[0].start.abs() > TILE_EPS {
            return bad(
                "noise",
                format!("first noise level starts at {}, must start at 0", self.noise_profile[0].start),
            );
        }
        let mut prev = -1.0;
        for (i, level) in self.noise_profile.iter().enumerate() {
            if level.start <= prev || level.start >= self.duration {
                return bad("noise", format!("noise level {} start {} not strictly increasing within [0, duration)", i, level.start));
            }
            if !(level.std >= 0.0) || !level.std.is_finite() {
                return bad("noise", format!("noise level {} std {} must be >= 0", i, level.std));
            }
            prev = level.start;
        }
        for (i, o) in self.outliers.iter().enumerate() {
            if !(o.time >= 0.0 && o.time < self.duration) {
                return bad("outlier", format!("outlier {} time {} outside [0, duration)", i, o.time));
            }
            if !o.magnitude.is_finite() {
                return bad("outlier", format!("outlier {} magnitude not finite", i));
            }
        }
        Ok(())
    }

    fn std_at(&self, t: f64) -> f64 {
        let mut std = self.noise_profile[0].std;
        for level in &self.noise_profile {
            if level.start <= t + TILE_EPS {
                std = level.std;
            } else {
                break;
            }
        }
        std
    }
}

/// Generate the scenario samples. The noise stream is drawn from a counter
/// based generator seeded with `spec.seed`, one standard-normal draw per
/// sample, so the draw sequence does not depend on the noise profile.
pub fn generate(spec: &ScenarioSpec) -> Result<ScenarioData> {
    spec.validate()?;
    let n = spec.sample_count();
    let fs = spec.sample_rate;

    let mut x = Vec::with_capacity(n);
    let mut seg_idx = 0usize;
    let mut phase = 0.0f64;
    for k in 0..n {
        let t = k as f64 / fs;
        while seg_idx + 1 < spec.segments.len() && t >= spec.segments[seg_idx].end - TILE_EPS {
            seg_idx += 1;
            phase = 0.0;
        }
        let seg = &spec.segments[seg_idx];
        let value = match seg.kind {
            SegmentKind::Constant { level } => level,
            SegmentKind::Step { from, to, ramp } => {
                if ramp == 0.0 {
                    to
                } else {
                    let frac = ((t - seg.start) / ramp).clamp(0.0, 1.0);
                    from + (to - from) * frac
                }
            }
            SegmentKind::Chirp { center, amplitude, f_start, f_peak, f_end } => {
                let value = center + amplitude * phase.sin();
                // Advance phase with the instantaneous frequency: linear rise
                // to the peak over the first half, linear fall after.
                let half = 0.5 * (seg.start + seg.end);
                let f = if t < half {
                    f_start + (f_peak - f_start) * (t - seg.start) / (half - seg.start)
                } else {
                    f_peak + (f_end - f_peak) * (t - half) / (seg.end - half)
                };
                phase += 2.0 * std::f64::consts::PI * f / fs;
                value
            }
        };
        x.push(value);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut y = Vec::with_capacity(n);
    let mut r_true = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / fs;
        let std = spec.std_at(t);
        let z: f64 = StandardNormal.sample(&mut rng);
        y.push(x[k] + std * z);
        r_true.push(std * std);
    }
    for o in &spec.outliers {
        let idx = (o.time * fs).round() as usize;
        if idx < n {
            y[idx] += o.magnitude;
        }
    }
    Ok(ScenarioData { x, y, r_true })
}

/// The canonical simulation scenario shipped with the repository.
///
/// Timeline at 100 Hz over 25 s: steady at zero, a large disturbance jump at
/// t = 5 s and a partial correction at t = 7.5 s, an oscillation from t = 10 s
/// whose frequency rises to 8 Hz and falls back, stabilisation at t = 20 s,
/// and a measurement outlier at t = 22 s. The noise standard deviation is
/// 0.05 initially and 0.5 from t = 10 s. Exact values live in
/// `scenarios/section5.cfg`; all golden tests reference that file.
pub fn default_section5_spec() -> ScenarioSpec {
    ScenarioSpec {
        sample_rate: 100.0,
        duration: 25.0,
        segments: vec![
            Segment { start: 0.0, end: 5.0, kind: SegmentKind::Constant { level: 0.0 } },
            Segment { start: 5.0, end: 7.5, kind: SegmentKind::Constant { level: 20.0 } },
            Segment { start: 7.5, end: 10.0, kind: SegmentKind::Constant { level: 6.0 } },
            Segment {
                start: 10.0,
                end: 20.0,
                kind: SegmentKind::Chirp {
                    center: 6.0,
                    amplitude: 2.0,
                    f_start: 0.5,
                    f_peak: 8.0,
                    f_end: 0.5,
                },
            },
            Segment { start: 20.0, end: 25.0, kind: SegmentKind::Constant { level: 6.0 } },
        ],
        noise_profile: vec![
            NoiseLevel { start: 0.0, std: 0.05 },
            NoiseLevel { start: 10.0, std: 0.5 },
        ],
        outliers: vec![Outlier { time: 22.0, magnitude: 10.0 }],
        seed: 42,
    }
}

fn parse_field<T: std::str::FromStr>(field: &'static str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::InvalidScenario {
        field,
        reason: format!("cannot parse `{}`", raw.trim()),
    })
}

fn kv_lookup(pairs: &[(String, f64)], field: &'static str, key: &str) -> Result<f64> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::InvalidScenario {
            field,
            reason: format!("missing `{}=`", key),
        })
}

fn parse_segment(raw: &str) -> Result<Segment> {
    let mut tokens = raw.split_whitespace();
    let start: f64 = parse_field("segment", tokens.next().unwrap_or(""))?;
    let end: f64 = parse_field("segment", tokens.next().unwrap_or(""))?;
    let kind_name = tokens.next().unwrap_or("").to_string();
    let mut pairs = Vec::new();
    for tok in tokens {
        let (key, value) = tok.split_once('=').ok_or(Error::InvalidScenario {
            field: "segment",
            reason: format!("expected key=value, got `{}`", tok),
        })?;
        pairs.push((key.to_string(), parse_field("segment", value)?));
    }
    let kind = match kind_name.as_str() {
        "constant" => SegmentKind::Constant {
            level: kv_lookup(&pairs, "segment", "level")?,
        },
        "step" => SegmentKind::Step {
            from: kv_lookup(&pairs, "segment", "from")?,
            to: kv_lookup(&pairs, "segment", "to")?,
            ramp: kv_lookup(&pairs, "segment", "ramp")?,
        },
        "chirp" => SegmentKind::Chirp {
            center: kv_lookup(&pairs, "segment", "center")?,
            amplitude: kv_lookup(&pairs, "segment", "amplitude")?,
            f_start: kv_lookup(&pairs, "segment", "f_start")?,
            f_peak: kv_lookup(&pairs, "segment", "f_peak")?,
            f_end: kv_lookup(&pairs, "segment", "f_end")?,
        },
        other => {
            return Err(Error::InvalidScenario {
                field: "segment",
                reason: format!("unknown segment kind `{}`", other),
            })
        }
    };
    Ok(Segment { start, end, kind })
}

/// Parse the flat-text scenario format: one `key = value` per line, `#`
/// comments, with repeatable `segment`, `noise` and `outlier` entries.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let mut sample_rate = None;
    let mut duration = None;
    let mut seed = None;
    let mut segments = Vec::new();
    let mut noise_profile = Vec::new();
    let mut outliers = Vec::new();

    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::InvalidScenario {
            field: "line",
            reason: format!("expected `key = value`, got `{}`", line),
        })?;
        let value = value.trim();
        match key.trim() {
            "sample_rate" => sample_rate = Some(parse_field("sample_rate", value)?),
            "duration" => duration = Some(parse_field("duration", value)?),
            "seed" => seed = Some(parse_field::<u64>("seed", value)?),
            "segment" => segments.push(parse_segment(value)?),
            "noise" => {
                let mut it = value.split_whitespace();
                let start = parse_field("noise", it.next().unwrap_or(""))?;
                let std = parse_field("noise", it.next().unwrap_or(""))?;
                noise_profile.push(NoiseLevel { start, std });
            }
            "outlier" => {
                let mut it = value.split_whitespace();
                let time = parse_field("outlier", it.next().unwrap_or(""))?;
                let magnitude = parse_field("outlier", it.next().unwrap_or(""))?;
                outliers.push(Outlier { time, magnitude });
            }
            other => {
                return Err(Error::InvalidScenario {
                    field: "line",
                    reason: format!("unknown key `{}`", other),
                })
            }
        }
    }

    let spec = ScenarioSpec {
        sample_rate: sample_rate.ok_or(Error::InvalidScenario {
            field: "sample_rate",
            reason: "missing".into(),
        })?,
        duration: duration.ok_or(Error::InvalidScenario {
            field: "duration",
            reason: "missing".into(),
        })?,
        segments,
        noise_profile,
        outliers,
        seed: seed.unwrap_or(0),
    };
    spec.validate()?;
    Ok(spec)
}

/// Render a spec in the canonical flat-text form accepted by
/// [`parse_scenario`].
pub fn render_scenario(spec: &ScenarioSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("sample_rate = {}\n", spec.sample_rate));
    out.push_str(&format!("duration = {}\n", spec.duration));
    out.push_str(&format!("seed = {}\n", spec.seed));
    for seg in &spec.segments {
        match seg.kind {
            SegmentKind::Constant { level } => {
                out.push_str(&format!("segment = {} {} constant level={}\n", seg.start, seg.end, level));
            }
            SegmentKind::Step { from, to, ramp } => {
                out.push_str(&format!(
                    "segment = {} {} step from={} to={} ramp={}\n",
                    seg.start, seg.end, from, to, ramp
                ));
            }
            SegmentKind::Chirp { center, amplitude, f_start, f_peak, f_end } => {
                out.push_str(&format!(
                    "segment = {} {} chirp center={} amplitude={} f_start={} f_peak={} f_end={}\n",
                    seg.start, seg.end, center, amplitude, f_start, f_peak, f_end
                ));
            }
        }
    }
    for level in &spec.noise_profile {
        out.push_str(&format!("noise = {} {}\n", level.start, level.std));
    }
    for o in &spec.outliers {
        out.push_str(&format!("outlier = {} {}\n", o.time, o.magnitude));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_spec(std: f64) -> ScenarioSpec {
        ScenarioSpec {
            sample_rate: 100.0,
            duration: 2.0,
            segments: vec![Segment {
                start: 0.0,
                end: 2.0,
                kind: SegmentKind::Constant { level: 1.5 },
            }],
            noise_profile: vec![NoiseLevel { start: 0.0, std }],
            outliers: vec![],
            seed: 7,
        }
    }

    #[test]
    fn noiseless_constant_reproduces_signal() {
        let data = generate(&flat_spec(0.0)).unwrap();
        assert_eq!(data.x.len(), 200);
        assert_eq!(data.x, data.y);
        assert!(data.r_true.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = default_section5_spec();
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let mut reseeded = spec.clone();
        reseeded.seed += 1;
        assert_ne!(generate(&reseeded).unwrap().y, generate(&spec).unwrap().y);
    }

    #[test]
    fn section5_timeline() {
        let spec = default_section5_spec();
        spec.validate().unwrap();
        let data = generate(&spec).unwrap();
        assert_eq!(data.x.len(), 2500);
        // Jump at sample 500, correction at 750, chirp over [1000, 2000).
        assert_eq!(data.x[499], 0.0);
        assert_eq!(data.x[500], 20.0);
        assert_eq!(data.x[750], 6.0);
        assert_eq!(data.x[1000], 6.0); // chirp starts at its center
        assert_eq!(data.x[2400], 6.0);
        // Noise floor switches at t = 10 s.
        assert_eq!(data.r_true[999], 0.05 * 0.05);
        assert_eq!(data.r_true[1000], 0.25);
        // Outlier lands on sample 2200 only.
        let spike = (data.y[2200] - data.x[2200]).abs();
        assert!(spike > 7.0, "outlier spike {} too small", spike);
        // At least two distinct noise levels.
        let mut levels: Vec<f64> = data.r_true.clone();
        levels.dedup();
        assert!(levels.len() >= 2);
    }

    #[test]
    fn chirp_phase_is_continuous() {
        let spec = default_section5_spec();
        let data = generate(&spec).unwrap();
        let (amplitude, f_max, fs) = (2.0, 8.0, 100.0);
        let bound = amplitude * 2.0 * std::f64::consts::PI * f_max / fs * 1.001;
        for k in 1000..2000 {
            let step = (data.x[k] - data.x[k - 1]).abs();
            assert!(step <= bound, "step {} at sample {} exceeds {}", step, k, bound);
        }
    }

    #[test]
    fn validation_names_offending_field() {
        let mut spec = flat_spec(0.1);
        spec.noise_profile[0].std = -1.0;
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidScenario { field: "noise", .. })
        ));

        let mut spec = flat_spec(0.1);
        spec.segments[0].end = 1.0; // gap before duration
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidScenario { field: "segments", .. })
        ));

        let mut spec = flat_spec(0.1);
        spec.segments[0].kind = SegmentKind::Chirp {
            center: 0.0,
            amplitude: 1.0,
            f_start: 60.0, // above Nyquist for fs = 100
            f_peak: 5.0,
            f_end: 5.0,
        };
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidScenario { field: "frequency", .. })
        ));

        let mut spec = flat_spec(0.1);
        spec.outliers.push(Outlier { time: 99.0, magnitude: 1.0 });
        assert!(matches!(
            spec.validate(),
            Err(Error::InvalidScenario { field: "outlier", .. })
        ));
    }

    #[test]
    fn step_segment_ramps_then_holds() {
        let spec = ScenarioSpec {
            sample_rate: 10.0,
            duration: 2.0,
            segments: vec![
                Segment { start: 0.0, end: 1.0, kind: SegmentKind::Constant { level: 1.0 } },
                Segment { start: 1.0, end: 2.0, kind: SegmentKind::Step { from: 1.0, to: 3.0, ramp: 0.5 } },
            ],
            noise_profile: vec![NoiseLevel { start: 0.0, std: 0.0 }],
            outliers: vec![],
            seed: 0,
        };
        let data = generate(&spec).unwrap();
        assert_eq!(data.x[10], 1.0); // ramp start
        assert!((data.x[12] - 1.8).abs() < 1e-12); // 0.2 s into a 0.5 s ramp
        assert_eq!(data.x[15], 3.0); // ramp done
        assert_eq!(data.x[19], 3.0);
    }

    #[test]
    fn cfg_round_trip_and_errors() {
        let spec = default_section5_spec();
        let text = render_scenario(&spec);
        assert_eq!(parse_scenario(&text).unwrap(), spec);

        assert!(matches!(
            parse_scenario("duration = 1\nnoise = 0 0.1\nsegment = 0 1 constant level=0"),
            Err(Error::InvalidScenario { field: "sample_rate", .. })
        ));
        assert!(matches!(
            parse_scenario("sample_rate = 10\nduration = 1\nsegment = 0 1 wiggle level=0\nnoise = 0 0.1"),
            Err(Error::InvalidScenario { field: "segment", .. })
        ));
        assert!(matches!(
            parse_scenario("bogus = 3"),
            Err(Error::InvalidScenario { field: "line", .. })
        ));
    }
}
