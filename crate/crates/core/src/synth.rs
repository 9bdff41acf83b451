//! AM-FM test signals with closed-form ground truth, and a synthetic
//! voice/music corpus.
//!
//! A component is
//!
//! ```text
//! x[n] = A (1 + d cos(2 pi f_am n / fs)) cos(2 pi f_c n / fs + (f_dev / f_fm) sin(2 pi f_fm n / fs) + theta)
//! ```
//!
//! whose phase derivative is `f_c + f_dev cos(2 pi f_fm n / fs)`. The
//! modulating function is a cosine, so `|q| <= 1` holds and the phase
//! integral is closed form.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::esa::DemodTrack;
use crate::signal::{SampledSignal, Tag};
use crate::wave_io::LabeledSegment;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid AM-FM parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmFmParams {
    pub amplitude: f64,
    pub carrier_hz: f64,
    /// Peak frequency deviation.
    pub fm_dev_hz: f64,
    pub fm_rate_hz: f64,
    pub am_depth: f64,
    pub am_rate_hz: f64,
    pub phase: f64,
}

impl AmFmParams {
    /// An unmodulated sinusoid.
    pub fn tone(amplitude: f64, carrier_hz: f64, phase: f64) -> Self {
        Self {
            amplitude,
            carrier_hz,
            fm_dev_hz: 0.0,
            fm_rate_hz: 0.0,
            am_depth: 0.0,
            am_rate_hz: 0.0,
            phase,
        }
    }

    pub fn validate(&self, sample_rate_hz: f64) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidParams(m));
        let fields = [
            self.amplitude,
            self.carrier_hz,
            self.fm_dev_hz,
            self.fm_rate_hz,
            self.am_depth,
            self.am_rate_hz,
            self.phase,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return bad("non-finite field".into());
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return bad(format!("sample rate {sample_rate_hz}"));
        }
        if self.amplitude <= 0.0 {
            return bad(format!("amplitude {} must be positive", self.amplitude));
        }
        if self.fm_dev_hz < 0.0 || self.fm_rate_hz < 0.0 || self.am_rate_hz < 0.0 {
            return bad("rates and deviation must be non-negative".into());
        }
        if !(0.0..1.0).contains(&self.am_depth) {
            return bad(format!("am_depth {} outside [0, 1)", self.am_depth));
        }
        if self.carrier_hz - self.fm_dev_hz <= 0.0 {
            return bad("carrier minus deviation must be positive".into());
        }
        if self.carrier_hz + self.fm_dev_hz >= sample_rate_hz / 2.0 {
            return bad("carrier plus deviation must stay below Nyquist".into());
        }
        Ok(())
    }

    fn fm_index(&self) -> f64 {
        if self.fm_rate_hz == 0.0 {
            0.0
        } else {
            self.fm_dev_hz / self.fm_rate_hz
        }
    }

    fn sample(&self, n: usize, fs: f64) -> f64 {
        let t = n as f64 / fs;
        let envelope = self.amplitude * (1.0 + self.am_depth * (2.0 * PI * self.am_rate_hz * t).cos());
        let phase = 2.0 * PI * self.carrier_hz * t
            + self.fm_index() * (2.0 * PI * self.fm_rate_hz * t).sin()
            + self.phase;
        envelope * phase.cos()
    }

    fn true_freq(&self, n: usize, fs: f64) -> f64 {
        let t = n as f64 / fs;
        self.carrier_hz + self.fm_dev_hz * (2.0 * PI * self.fm_rate_hz * t).cos()
    }

    fn true_amp(&self, n: usize, fs: f64) -> f64 {
        let t = n as f64 / fs;
        self.amplitude * (1.0 + self.am_depth * (2.0 * PI * self.am_rate_hz * t).cos())
    }
}

fn sample_count(duration_s: f64, sample_rate_hz: f64) -> Result<usize, SynthError> {
    if !(duration_s.is_finite() && duration_s >= 0.0) {
        return Err(SynthError::InvalidParams(format!("duration {duration_s}")));
    }
    Ok((duration_s * sample_rate_hz).round() as usize)
}

/// Generates one component and its exact instantaneous frequency/amplitude.
pub fn gen_am_fm(
    params: &AmFmParams,
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<(SampledSignal, DemodTrack), SynthError> {
    params.validate(sample_rate_hz)?;
    let n = sample_count(duration_s, sample_rate_hz)?;
    let x = (0..n).map(|i| params.sample(i, sample_rate_hz)).collect();
    let freq = (0..n).map(|i| params.true_freq(i, sample_rate_hz)).collect();
    let amp = (0..n).map(|i| params.true_amp(i, sample_rate_hz)).collect();
    let truth = DemodTrack::new(freq, amp, vec![true; n], sample_rate_hz)
        .expect("equal lengths by construction");
    Ok((SampledSignal::new_unchecked(x, sample_rate_hz), truth))
}

pub fn gen_multicomponent(
    components: &[AmFmParams],
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<SampledSignal, SynthError> {
    for c in components {
        c.validate(sample_rate_hz)?;
    }
    let n = sample_count(duration_s, sample_rate_hz)?;
    let x = (0..n)
        .map(|i| components.iter().map(|c| c.sample(i, sample_rate_hz)).sum())
        .collect();
    Ok(SampledSignal::new_unchecked(x, sample_rate_hz))
}

/// Signal-to-noise ratio of the white noise floor added to corpus segments.
pub const CORPUS_SNR_DB: f64 = 30.0;
/// Sum of component amplitudes in every corpus segment, leaving WAV headroom.
const CORPUS_PEAK: f64 = 0.5;
const VOICE_HARMONICS: usize = 4;

/// Harmonic stack with coherent vibrato: harmonic `k` sits at `k f0` with
/// deviation `k` times the fundamental's, so the whole stack bends together.
fn voice_components(rng: &mut impl Rng) -> Vec<AmFmParams> {
    let f0 = rng.random_range(150.0..350.0);
    let vibrato_rate = rng.random_range(5.0..7.0);
    let vibrato_depth = rng.random_range(0.02..0.04) * f0;
    let weight: f64 = (1..=VOICE_HARMONICS).map(|k| 1.0 / k as f64).sum();
    (1..=VOICE_HARMONICS)
        .map(|k| {
            let k_f = k as f64;
            AmFmParams {
                amplitude: CORPUS_PEAK / (k_f * weight),
                carrier_hz: k_f * f0,
                fm_dev_hz: k_f * vibrato_depth,
                fm_rate_hz: vibrato_rate,
                am_depth: 0.0,
                am_rate_hz: 0.0,
                phase: rng.random_range(0.0..2.0 * PI),
            }
        })
        .collect()
}

/// Three to six steady tones spread over 100-5000 Hz.
fn music_components(rng: &mut impl Rng) -> Vec<AmFmParams> {
    let count = rng.random_range(3..=6);
    let raw: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            (
                rng.random_range(0.3..1.0),
                rng.random_range(100.0..5000.0),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let total: f64 = raw.iter().map(|r| r.0).sum();
    raw.into_iter()
        .map(|(a, f, ph)| AmFmParams::tone(CORPUS_PEAK * a / total, f, ph))
        .collect()
}

fn add_noise(x: &mut [f64], snr_db: f64, rng: &mut impl Rng) {
    if x.is_empty() {
        return;
    }
    let power = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    let std = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    if std == 0.0 {
        return;
    }
    let normal = Normal::new(0.0, std).expect("finite positive std");
    for v in x.iter_mut() {
        *v += normal.sample(rng);
    }
}

/// Random generator for segment `index` of the corpus seeded by `seed`.
fn segment_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn corpus_segment(
    tag: Tag,
    index: usize,
    segment_len_s: f64,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<LabeledSegment, SynthError> {
    let mut rng = segment_rng(seed, index as u64);
    let components = match tag {
        Tag::Voice => voice_components(&mut rng),
        Tag::Music => music_components(&mut rng),
    };
    let mut samples = gen_multicomponent(&components, segment_len_s, sample_rate_hz)?.into_samples();
    add_noise(&mut samples, CORPUS_SNR_DB, &mut rng);
    Ok(LabeledSegment {
        signal: SampledSignal::new_unchecked(samples, sample_rate_hz),
        tag,
        source_id: format!("synth-{index:05}-{}", tag.code()),
        start_s: 0.0,
    })
}

/// Voice segments come first (indices `0..n_voice`), then music. Every
/// segment draws from its own stream of the seeded generator, so the corpus
/// is identical whatever the thread count.
pub fn gen_corpus(
    n_voice: usize,
    n_music: usize,
    segment_len_s: f64,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<Vec<LabeledSegment>, SynthError> {
    if !(segment_len_s.is_finite() && segment_len_s > 0.0) {
        return Err(SynthError::InvalidParams(format!(
            "segment length {segment_len_s}"
        )));
    }
    // The widest draws: 4 * 350 Hz * 1.04 for voice, 5000 Hz for music.
    if sample_rate_hz / 2.0 <= 5000.0 {
        return Err(SynthError::InvalidParams(format!(
            "sample rate {sample_rate_hz} Hz too low for the corpus recipes"
        )));
    }
    (0..n_voice + n_music)
        .into_par_iter()
        .map(|i| {
            let tag = if i < n_voice { Tag::Voice } else { Tag::Music };
            corpus_segment(tag, i, segment_len_s, sample_rate_hz, seed)
        })
        .collect()
}
