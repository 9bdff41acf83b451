//! Real Gabor bandpass kernels and the Mel-spaced filterbank built from them.
//!
//! A band is specified by its center frequency and a frequency-domain
//! standard deviation `bandwidth_hz`. The time-domain Gaussian spread is the
//! Fourier dual, `sigma_t = fs / (2 pi bandwidth_hz)` samples, and the kernel
//! is the cosine-modulated Gaussian truncated at `truncation_sigmas * sigma_t`
//! and scaled to unit gain at the center frequency.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signal::SampledSignal;

pub const DEFAULT_TRUNCATION_SIGMAS: f64 = 4.0;
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 22050.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaborError {
    #[error("band center {center_hz} Hz is not below Nyquist ({nyquist_hz} Hz)")]
    CenterAboveNyquist { center_hz: f64, nyquist_hz: f64 },
    #[error("invalid band: center {center_hz} Hz, bandwidth {bandwidth_hz} Hz")]
    InvalidBand { center_hz: f64, bandwidth_hz: f64 },
    #[error("invalid Mel range: {n_bands} bands over [{f_low_hz}, {f_high_hz}] Hz")]
    InvalidRange {
        n_bands: usize,
        f_low_hz: f64,
        f_high_hz: f64,
    },
    #[error("filterbank has no bands")]
    NoBands,
    #[error("truncation must be a positive number of sigmas, got {0}")]
    InvalidTruncation(f64),
    #[error("invalid sample rate {0} Hz")]
    InvalidSampleRate(f64),
    #[error("signal sampled at {signal_hz} Hz, band built for {band_hz} Hz")]
    SampleRateMismatch { signal_hz: f64, band_hz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub center_hz: f64,
    pub bandwidth_hz: f64,
}

impl BandSpec {
    pub const fn new(center_hz: f64, bandwidth_hz: f64) -> Self {
        Self {
            center_hz,
            bandwidth_hz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterbankConfig {
    pub bands: Vec<BandSpec>,
    pub sample_rate_hz: f64,
    #[serde(default = "default_truncation")]
    pub truncation_sigmas: f64,
}

fn default_truncation() -> f64 {
    DEFAULT_TRUNCATION_SIGMAS
}

/// The three low bands used for voice/music discrimination at 22.05 kHz.
pub fn default_bands() -> FilterbankConfig {
    FilterbankConfig {
        bands: vec![
            BandSpec::new(240.0, 200.0),
            BandSpec::new(738.0, 606.0),
            BandSpec::new(1361.0, 1246.0),
        ],
        sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
        truncation_sigmas: DEFAULT_TRUNCATION_SIGMAS,
    }
}

impl FilterbankConfig {
    pub fn with_sample_rate(mut self, sample_rate_hz: f64) -> Self {
        self.sample_rate_hz = sample_rate_hz;
        self
    }

    pub fn validate(&self) -> Result<(), GaborError> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(GaborError::InvalidSampleRate(self.sample_rate_hz));
        }
        if !(self.truncation_sigmas.is_finite() && self.truncation_sigmas > 0.0) {
            return Err(GaborError::InvalidTruncation(self.truncation_sigmas));
        }
        if self.bands.is_empty() {
            return Err(GaborError::NoBands);
        }
        for b in &self.bands {
            check_band(b.center_hz, b.bandwidth_hz, self.sample_rate_hz)?;
        }
        Ok(())
    }

    /// Builds one kernel per configured band, in order.
    pub fn build(&self) -> Result<Vec<GaborBand>, GaborError> {
        self.validate()?;
        self.bands
            .iter()
            .map(|b| {
                gabor_kernel(
                    b.center_hz,
                    b.bandwidth_hz,
                    self.sample_rate_hz,
                    self.truncation_sigmas,
                )
            })
            .collect()
    }
}

pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

pub fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Places `n_bands` centers at interior points `i / (n_bands + 1)` of an
/// evenly divided Mel interval. Each bandwidth is half the Hz distance
/// between the grid points on either side of the center.
pub fn mel_spaced_bands(
    n_bands: usize,
    f_low_hz: f64,
    f_high_hz: f64,
) -> Result<Vec<BandSpec>, GaborError> {
    if n_bands == 0 || !(f_low_hz.is_finite() && f_high_hz.is_finite()) || f_low_hz < 0.0 || f_low_hz >= f_high_hz
    {
        return Err(GaborError::InvalidRange {
            n_bands,
            f_low_hz,
            f_high_hz,
        });
    }
    let lo = hz_to_mel(f_low_hz);
    let step = (hz_to_mel(f_high_hz) - lo) / (n_bands + 1) as f64;
    let grid = |i: usize| mel_to_hz(lo + step * i as f64);
    Ok((1..=n_bands)
        .map(|i| BandSpec::new(grid(i), 0.5 * (grid(i + 1) - grid(i - 1))))
        .collect())
}

fn check_band(center_hz: f64, bandwidth_hz: f64, sample_rate_hz: f64) -> Result<(), GaborError> {
    if !(center_hz.is_finite() && center_hz > 0.0 && bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(GaborError::InvalidBand {
            center_hz,
            bandwidth_hz,
        });
    }
    let nyquist_hz = sample_rate_hz / 2.0;
    if center_hz >= nyquist_hz {
        return Err(GaborError::CenterAboveNyquist {
            center_hz,
            nyquist_hz,
        });
    }
    Ok(())
}

/// One bandpass channel with its discretized, even-symmetric real kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborBand {
    center_hz: f64,
    bandwidth_hz: f64,
    sample_rate_hz: f64,
    kernel: Vec<f64>,
    half_len: usize,
}

pub fn gabor_kernel(
    center_hz: f64,
    bandwidth_hz: f64,
    sample_rate_hz: f64,
    truncation_sigmas: f64,
) -> Result<GaborBand, GaborError> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(GaborError::InvalidSampleRate(sample_rate_hz));
    }
    if !(truncation_sigmas.is_finite() && truncation_sigmas > 0.0) {
        return Err(GaborError::InvalidTruncation(truncation_sigmas));
    }
    check_band(center_hz, bandwidth_hz, sample_rate_hz)?;

    let sigma_t = sample_rate_hz / (2.0 * PI * bandwidth_hz);
    let half_len = (truncation_sigmas * sigma_t).ceil() as usize;
    let omega = 2.0 * PI * center_hz / sample_rate_hz;

    // taps[m] holds the coefficient at lag m >= 0; the kernel mirrors it.
    let taps: Vec<f64> = (0..=half_len)
        .map(|m| {
            let m = m as f64;
            (-m * m / (2.0 * sigma_t * sigma_t)).exp() * (omega * m).cos()
        })
        .collect();
    // Even symmetry makes the response at the center real.
    let gain = taps[0]
        + 2.0
            * taps[1..]
                .iter()
                .enumerate()
                .map(|(i, t)| t * (omega * (i + 1) as f64).cos())
                .sum::<f64>();
    let norm = 1.0 / gain.abs();

    let mut kernel = Vec::with_capacity(2 * half_len + 1);
    kernel.extend(taps.iter().rev().map(|t| t * norm));
    kernel.extend(taps[1..].iter().map(|t| t * norm));

    Ok(GaborBand {
        center_hz,
        bandwidth_hz,
        sample_rate_hz,
        kernel,
        half_len,
    })
}

impl GaborBand {
    pub fn center_hz(&self) -> f64 {
        self.center_hz
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn half_len(&self) -> usize {
        self.half_len
    }

    /// Same-length filtering with zero-padded edges; `output[n]` is aligned
    /// with `input[n]`.
    pub fn bandpass(&self, signal: &SampledSignal) -> Result<SampledSignal, GaborError> {
        if signal.sample_rate_hz() != self.sample_rate_hz {
            return Err(GaborError::SampleRateMismatch {
                signal_hz: signal.sample_rate_hz(),
                band_hz: self.sample_rate_hz,
            });
        }
        Ok(SampledSignal::new_unchecked(
            self.filter_slice(signal.samples()),
            self.sample_rate_hz,
        ))
    }

    /// The raw convolution behind [`GaborBand::bandpass`].
    pub fn filter_slice(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let h = self.half_len;
        let taps = &self.kernel[h..];
        let mut out = vec![0.0; n];

        let edge = |i: usize| -> f64 {
            let mut acc = taps[0] * x[i];
            for (m, &t) in taps.iter().enumerate().skip(1) {
                let left = if i >= m { x[i - m] } else { 0.0 };
                let right = if i + m < n { x[i + m] } else { 0.0 };
                acc += t * (left + right);
            }
            acc
        };

        if n <= 2 * h {
            for (i, o) in out.iter_mut().enumerate() {
                *o = edge(i);
            }
            return out;
        }
        for i in 0..h {
            out[i] = edge(i);
            out[n - 1 - i] = edge(n - 1 - i);
        }
        for i in h..n - h {
            let mut acc = taps[0] * x[i];
            for m in 1..=h {
                acc += taps[m] * (x[i - m] + x[i + m]);
            }
            out[i] = acc;
        }
        out
    }
}
