use std::fmt;

/// Errors reported by the estimation, baseline and scenario routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A measurement was NaN or infinite. Carries the step index of the
    /// offending sample; non-finite inputs are never skipped or gap-filled.
    NonFiniteMeasurement { index: usize },
    /// Estimator gain outside the stability interval (0, 1).
    InvalidGain(f64),
    /// Window length must be at least one sample.
    InvalidWindowLength(usize),
    /// MAD scale factor must be positive and finite.
    InvalidMadScale(f64),
    /// Lag count must satisfy 1 <= lags and leave at least two samples of slack.
    InvalidLagCount(usize),
    /// A windowed operation received a slice whose length does not match the
    /// window contract for the given step index.
    WindowLengthMismatch { expected: usize, actual: usize },
    /// A sequence was too short for the requested operation.
    ShortSequence { needed: usize, actual: usize },
    /// An innovation-variance estimate must be non-negative.
    NegativeVariance(f64),
    /// The input stream was empty.
    EmptyStream,
    /// The normal equations of a least-squares fit were singular.
    SingularFit,
    /// A scenario specification failed validation. Names the offending field.
    InvalidScenario { field: &'static str, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteMeasurement { index } => {
                write!(f, "non-finite measurement at step {}", index)
            }
            Error::InvalidGain(k) => write!(f, "estimator gain {} outside (0, 1)", k),
            Error::InvalidWindowLength(m) => write!(f, "window length {} must be >= 1", m),
            Error::InvalidMadScale(a) => write!(f, "MAD scale {} must be positive", a),
            Error::InvalidLagCount(l) => write!(f, "lag count {} must be >= 1", l),
            Error::WindowLengthMismatch { expected, actual } => {
                write!(f, "window holds {} values, expected {}", actual, expected)
            }
            Error::ShortSequence { needed, actual } => {
                write!(f, "sequence of length {} too short, need {}", actual, needed)
            }
            Error::NegativeVariance(c) => write!(f, "negative variance estimate {}", c),
            Error::EmptyStream => write!(f, "measurement stream is empty"),
            Error::SingularFit => write!(f, "singular normal equations in least-squares fit"),
            Error::InvalidScenario { field, reason } => {
                write!(f, "invalid scenario field `{}`: {}", field, reason)
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
