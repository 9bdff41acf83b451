//! Discrete Teager energy operator and DESA-1 energy separation.
//!
//! The continuous operator `psi[x] = x'^2 - x x''` applied to an AM-FM signal
//! `a(t) cos(phi(t))` approximates `a^2 w^2`. Its discrete form
//! `psi[x[n]] = x[n]^2 - x[n+1] x[n-1]` gives exactly `A^2 sin^2(W)` for a
//! sampled sinusoid, and DESA-1 separates that energy into frequency and
//! amplitude using the backward difference `y[n] = x[n] - x[n-1]`:
//!
//! ```text
//! W[n]   = arccos(1 - (psi[y[n]] + psi[y[n+1]]) / (4 psi[x[n]]))
//! |a[n]| = sqrt(psi[x[n]] / (1 - (1 - (psi[y[n]] + psi[y[n+1]]) / (4 psi[x[n]]))^2))
//! ```
//!
//! Writing `r = (psi[y[n]] + psi[y[n+1]]) / (4 psi[x[n]])`, the frequency is
//! evaluated as `2 asin(sqrt(r / 2))` and the amplitude denominator as
//! `r (2 - r)`. Both are algebraically identical to the arccos forms and stay
//! well conditioned at low frequencies, where `1 - r` is close to one.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EsaError {
    #[error("input has {len} samples, at least {min} required")]
    TooShort { len: usize, min: usize },
    #[error("TEO smoothing length must be odd and >= 1, got {0}")]
    InvalidSmoothing(usize),
    #[error("invalid sample rate {0} Hz")]
    InvalidSampleRate(f64),
    #[error("demodulation track fields have mismatched lengths")]
    LengthMismatch,
}

/// Relative floor on Teager energy below which a sample is masked.
pub const TEO_FLOOR_REL: f64 = 1e-10;
/// Largest arccos-argument excursion outside `[-1, 1]` that is clamped rather
/// than masked.
pub const CLAMP_TOLERANCE: f64 = 0.05;

/// Teager energy of the interior samples: `values[n - 1]` is the energy at
/// input index `n`, for `n` in `1..len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeoTrack {
    pub values: Vec<f64>,
}

pub fn teo(x: &[f64]) -> Result<TeoTrack, EsaError> {
    if x.len() < 3 {
        return Err(EsaError::TooShort { len: x.len(), min: 3 });
    }
    Ok(TeoTrack {
        values: x.windows(3).map(|w| w[1] * w[1] - w[2] * w[0]).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesaOptions {
    /// Odd moving-average length applied to every Teager energy track; 1
    /// disables smoothing.
    pub smooth_teo_len: usize,
}

impl Default for DesaOptions {
    fn default() -> Self {
        Self { smooth_teo_len: 1 }
    }
}

impl DesaOptions {
    pub fn validate(&self) -> Result<(), EsaError> {
        if self.smooth_teo_len == 0 || self.smooth_teo_len.is_multiple_of(2) {
            return Err(EsaError::InvalidSmoothing(self.smooth_teo_len));
        }
        Ok(())
    }
}

/// Per-sample instantaneous frequency and amplitude with a validity mask.
/// Index `n` corresponds to input sample `n`. Masked samples carry zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DemodTrack {
    inst_freq_hz: Vec<f64>,
    inst_amp: Vec<f64>,
    valid: Vec<bool>,
    sample_rate_hz: f64,
}

impl DemodTrack {
    pub fn new(
        inst_freq_hz: Vec<f64>,
        inst_amp: Vec<f64>,
        valid: Vec<bool>,
        sample_rate_hz: f64,
    ) -> Result<Self, EsaError> {
        if inst_freq_hz.len() != inst_amp.len() || inst_amp.len() != valid.len() {
            return Err(EsaError::LengthMismatch);
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(EsaError::InvalidSampleRate(sample_rate_hz));
        }
        Ok(Self {
            inst_freq_hz,
            inst_amp,
            valid,
            sample_rate_hz,
        })
    }

    pub fn inst_freq_hz(&self) -> &[f64] {
        &self.inst_freq_hz
    }

    pub fn inst_amp(&self) -> &[f64] {
        &self.inst_amp
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.valid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valid.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Frequencies of the valid samples, in order.
    pub fn valid_freqs(&self) -> impl Iterator<Item = f64> + '_ {
        self.inst_freq_hz
            .iter()
            .zip(&self.valid)
            .filter_map(|(&f, &v)| v.then_some(f))
    }

    /// Masks `n` samples at each end, e.g. a bandpass filter's transient.
    pub fn invalidate_edges(&mut self, n: usize) {
        let len = self.len();
        let n = n.min(len);
        for i in (0..n).chain(len - n..len) {
            self.mask(i);
        }
    }

    fn mask(&mut self, i: usize) {
        self.valid[i] = false;
        self.inst_freq_hz[i] = 0.0;
        self.inst_amp[i] = 0.0;
    }
}

fn moving_average(values: &mut [f64], len: usize) {
    if len <= 1 || values.is_empty() {
        return;
    }
    let half = len / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in values.iter() {
        acc += v;
        prefix.push(acc);
    }
    for (i, v) in values.iter_mut().enumerate() {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(prefix.len() - 1);
        *v = (prefix[hi] - prefix[lo]) / (hi - lo) as f64;
    }
}

pub fn desa1(x: &[f64], sample_rate_hz: f64) -> Result<DemodTrack, EsaError> {
    desa1_with(x, sample_rate_hz, &DesaOptions::default())
}

pub fn desa1_with(
    x: &[f64],
    sample_rate_hz: f64,
    options: &DesaOptions,
) -> Result<DemodTrack, EsaError> {
    let n = x.len();
    if n < 5 {
        return Err(EsaError::TooShort { len: n, min: 5 });
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(EsaError::InvalidSampleRate(sample_rate_hz));
    }
    options.validate()?;

    // psi_x[i] is the energy at input index i + 1.
    let mut psi_x = teo(x)?.values;
    // y[j] = x[j + 1] - x[j] is the backward difference at input index j + 1,
    // and psi_y[k] is its energy at input index k + 2.
    let y: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut psi_y = teo(&y)?.values;
    moving_average(&mut psi_x, options.smooth_teo_len);
    moving_average(&mut psi_y, options.smooth_teo_len);

    let mut freq = vec![0.0; n];
    let mut amp = vec![0.0; n];
    let mut valid = vec![false; n];

    let peak = psi_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak.is_finite() && peak > 0.0) {
        return DemodTrack::new(freq, amp, valid, sample_rate_hz);
    }
    let floor = TEO_FLOOR_REL * peak;
    let to_hz = sample_rate_hz / (2.0 * PI);

    for i in 2..n - 2 {
        let energy = psi_x[i - 1];
        if energy <= floor {
            continue;
        }
        let mut r = (psi_y[i - 2] + psi_y[i - 1]) / (4.0 * energy);
        if !r.is_finite() || !(-CLAMP_TOLERANCE..=2.0 + CLAMP_TOLERANCE).contains(&r) {
            continue;
        }
        r = r.clamp(0.0, 2.0);
        let denom = r * (2.0 - r);
        if denom <= floor {
            continue;
        }
        let omega = 2.0 * (0.5 * r).sqrt().min(1.0).asin();
        freq[i] = omega * to_hz;
        amp[i] = (energy / denom).sqrt();
        valid[i] = true;
    }
    DemodTrack::new(freq, amp, valid, sample_rate_hz)
}
