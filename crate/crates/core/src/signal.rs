use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),
    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },
}

/// A real-valued sample sequence with its sample rate.
///
/// Every sample is finite and the rate is strictly positive; both are checked
/// on construction and the value is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self, SignalError> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(SignalError::InvalidSampleRate(sample_rate_hz));
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SignalError::NonFiniteSample { index, value });
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// Skips validation. Callers guarantee the invariants hold.
    pub(crate) fn new_unchecked(samples: Vec<f64>, sample_rate_hz: f64) -> Self {
        debug_assert!(sample_rate_hz > 0.0);
        debug_assert!(samples.iter().all(|v| v.is_finite()));
        Self {
            samples,
            sample_rate_hz,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Returns a copy with every sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, SignalError> {
        Self::new(
            self.samples.iter().map(|v| v * factor).collect(),
            self.sample_rate_hz,
        )
    }

    /// Copies `samples[start..end]` into a new signal at the same rate.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self::new_unchecked(self.samples[start..end].to_vec(), self.sample_rate_hz)
    }
}

/// The two classes a segment can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    Voice,
    Music,
}

impl Tag {
    pub const ALL: [Tag; 2] = [Tag::Voice, Tag::Music];

    /// Row/column index used by confusion matrices.
    pub fn index(self) -> usize {
        match self {
            Tag::Voice => 0,
            Tag::Music => 1,
        }
    }

    pub fn other(self) -> Tag {
        match self {
            Tag::Voice => Tag::Music,
            Tag::Music => Tag::Voice,
        }
    }

    /// Single-letter code used in label files.
    pub fn code(self) -> char {
        match self {
            Tag::Voice => 'V',
            Tag::Music => 'M',
        }
    }

    pub fn from_code(code: &str) -> Option<Tag> {
        match code {
            "V" => Some(Tag::Voice),
            "M" => Some(Tag::Music),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Voice => "Voice",
            Tag::Music => "Music",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rate_and_nan() {
        assert!(matches!(
            SampledSignal::new(vec![0.0], 0.0),
            Err(SignalError::InvalidSampleRate(_))
        ));
        assert!(matches!(
            SampledSignal::new(vec![0.0, f64::NAN], 8000.0),
            Err(SignalError::NonFiniteSample { index: 1, .. })
        ));
    }

    #[test]
    fn tag_codes() {
        for tag in Tag::ALL {
            assert_eq!(Tag::from_code(&tag.code().to_string()), Some(tag));
            assert_eq!(tag.other().other(), tag);
        }
        assert_eq!(Tag::from_code("v"), None);
    }
}
