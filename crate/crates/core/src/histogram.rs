//! Instantaneous-frequency histograms and Kullback-Leibler divergence.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::esa::DemodTrack;

pub const DEFAULT_BINS: usize = 128;
pub const DEFAULT_SMOOTHING_ALPHA: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HistogramError {
    #[error("track has no valid samples")]
    NoValidSamples,
    #[error("histogram configurations differ")]
    ConfigMismatch,
    #[error("no histograms to accumulate")]
    EmptyInput,
    #[error("invalid histogram configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub n_bins: usize,
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    pub smoothing_alpha: f64,
}

impl HistogramConfig {
    /// Default binning over `[0, fs / 2]`.
    pub fn for_sample_rate(sample_rate_hz: f64) -> Self {
        Self {
            n_bins: DEFAULT_BINS,
            f_min_hz: 0.0,
            f_max_hz: sample_rate_hz / 2.0,
            smoothing_alpha: DEFAULT_SMOOTHING_ALPHA,
        }
    }

    pub fn validate(&self) -> Result<(), HistogramError> {
        if self.n_bins < 2 {
            return Err(HistogramError::InvalidConfig(format!(
                "n_bins must be >= 2, got {}",
                self.n_bins
            )));
        }
        if !(self.f_min_hz.is_finite() && self.f_max_hz.is_finite() && self.f_min_hz < self.f_max_hz) {
            return Err(HistogramError::InvalidConfig(format!(
                "need f_min_hz < f_max_hz, got [{}, {}]",
                self.f_min_hz, self.f_max_hz
            )));
        }
        if !(self.smoothing_alpha.is_finite() && self.smoothing_alpha > 0.0) {
            return Err(HistogramError::InvalidConfig(format!(
                "smoothing_alpha must be positive, got {}",
                self.smoothing_alpha
            )));
        }
        Ok(())
    }

    pub fn bin_width_hz(&self) -> f64 {
        (self.f_max_hz - self.f_min_hz) / self.n_bins as f64
    }

    /// Bin containing `f`; out-of-range values land in the edge bins.
    pub fn bin_index(&self, f: f64) -> usize {
        let pos = (f - self.f_min_hz) / (self.f_max_hz - self.f_min_hz) * self.n_bins as f64;
        if pos.is_nan() || pos < 0.0 {
            0
        } else {
            (pos.floor() as usize).min(self.n_bins - 1)
        }
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let w = self.bin_width_hz();
        (
            self.f_min_hz + w * bin as f64,
            self.f_min_hz + w * (bin + 1) as f64,
        )
    }
}

/// Smoothed probability mass over fixed frequency bins.
///
/// `probs[i] = (count[i] + alpha) / (sample_count + n_bins * alpha)`, so every
/// bin is strictly positive and the raw counts can be recovered exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqHistogram {
    probs: Vec<f64>,
    config: HistogramConfig,
    sample_count: u64,
}

impl FreqHistogram {
    pub fn from_counts(counts: &[u64], config: HistogramConfig) -> Result<Self, HistogramError> {
        config.validate()?;
        if counts.len() != config.n_bins {
            return Err(HistogramError::InvalidConfig(format!(
                "{} counts for {} bins",
                counts.len(),
                config.n_bins
            )));
        }
        let sample_count: u64 = counts.iter().sum();
        let total = sample_count as f64 + config.n_bins as f64 * config.smoothing_alpha;
        let probs = counts
            .iter()
            .map(|&c| (c as f64 + config.smoothing_alpha) / total)
            .collect();
        Ok(Self {
            probs,
            config,
            sample_count,
        })
    }

    /// Rebuilds a histogram from persisted probabilities.
    pub fn from_parts(
        probs: Vec<f64>,
        config: HistogramConfig,
        sample_count: u64,
    ) -> Result<Self, HistogramError> {
        config.validate()?;
        if probs.len() != config.n_bins {
            return Err(HistogramError::InvalidConfig(format!(
                "{} probabilities for {} bins",
                probs.len(),
                config.n_bins
            )));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(HistogramError::InvalidConfig(
                "probabilities must be finite and positive".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(HistogramError::InvalidConfig(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self {
            probs,
            config,
            sample_count,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn config(&self) -> &HistogramConfig {
        &self.config
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    /// Raw per-bin counts, inverted from the smoothed probabilities.
    pub fn counts(&self) -> Vec<u64> {
        let alpha = self.config.smoothing_alpha;
        let total = self.sample_count as f64 + self.config.n_bins as f64 * alpha;
        let counts: Vec<u64> = self
            .probs
            .iter()
            .map(|p| (p * total - alpha).round().max(0.0) as u64)
            .collect();
        debug_assert_eq!(counts.iter().sum::<u64>(), self.sample_count);
        counts
    }

    pub fn argmax(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// CSV with header `bin_low_hz,bin_high_hz,prob`, one row per bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low_hz,bin_high_hz,prob\n");
        for (i, p) in self.probs.iter().enumerate() {
            let (lo, hi) = self.config.bin_edges(i);
            let _ = writeln!(out, "{lo},{hi},{p:e}");
        }
        out
    }
}

pub fn build_histogram(
    track: &DemodTrack,
    config: &HistogramConfig,
) -> Result<FreqHistogram, HistogramError> {
    build_from_freqs(track.valid_freqs(), config)
}

pub fn build_from_freqs(
    freqs: impl IntoIterator<Item = f64>,
    config: &HistogramConfig,
) -> Result<FreqHistogram, HistogramError> {
    config.validate()?;
    let mut counts = vec![0u64; config.n_bins];
    for f in freqs {
        counts[config.bin_index(f)] += 1;
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(HistogramError::NoValidSamples);
    }
    FreqHistogram::from_counts(&counts, *config)
}

/// Pools histograms as if their source samples had been binned together.
pub fn accumulate(histograms: &[FreqHistogram]) -> Result<FreqHistogram, HistogramError> {
    let first = histograms.first().ok_or(HistogramError::EmptyInput)?;
    let mut counts = vec![0u64; first.config.n_bins];
    for h in histograms {
        if h.config != first.config {
            return Err(HistogramError::ConfigMismatch);
        }
        for (acc, c) in counts.iter_mut().zip(h.counts()) {
            *acc += c;
        }
    }
    FreqHistogram::from_counts(&counts, first.config)
}

/// `D(p1 || p2) = sum_i p1[i] ln(p1[i] / p2[i])`, in nats.
pub fn kl_divergence(p1: &FreqHistogram, p2: &FreqHistogram) -> Result<f64, HistogramError> {
    if p1.config != p2.config {
        return Err(HistogramError::ConfigMismatch);
    }
    Ok(p1
        .probs
        .iter()
        .zip(&p2.probs)
        .map(|(&a, &b)| a * (a / b).ln())
        .sum())
}
