use std::fs;
use std::path::Path;

use modsep::gabor::{default_bands, BandSpec, DEFAULT_TRUNCATION_SIGMAS};
use modsep::histogram::{DEFAULT_BINS, DEFAULT_SMOOTHING_ALPHA};
use modsep::{DesaOptions, FeaturePipeline, FilterbankConfig, HistogramConfig};
use serde::{Deserialize, Serialize};

use crate::error::{from_classifier, CliError};

/// Either the literal `"default"` or an explicit band list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BandSource {
    Named(String),
    List(Vec<BandSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistSettings {
    pub n_bins: usize,
    pub f_min_hz: f64,
    /// Defaults to the Nyquist frequency of the audio.
    pub f_max_hz: Option<f64>,
    pub smoothing_alpha: f64,
}

impl Default for HistSettings {
    fn default() -> Self {
        Self {
            n_bins: DEFAULT_BINS,
            f_min_hz: 0.0,
            f_max_hz: None,
            smoothing_alpha: DEFAULT_SMOOTHING_ALPHA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub bands: BandSource,
    pub truncation_sigmas: f64,
    pub hist: HistSettings,
    pub segment_len_s: f64,
    pub min_tail_s: f64,
    pub k_folds: usize,
    pub seed: u64,
    pub smooth_teo_len: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            bands: BandSource::Named("default".into()),
            truncation_sigmas: DEFAULT_TRUNCATION_SIGMAS,
            hist: HistSettings::default(),
            segment_len_s: 2.0,
            min_tail_s: 0.5,
            k_folds: 5,
            seed: 0,
            smooth_teo_len: 1,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if let BandSource::Named(name) = &cfg.bands {
            if name != "default" {
                return Err(CliError::Format {
                    path: path.to_path_buf(),
                    message: format!("unknown band set `{name}`, expected \"default\" or a list"),
                });
            }
        }
        Ok(cfg)
    }

    pub fn filterbank(&self, sample_rate_hz: f64) -> FilterbankConfig {
        let bands = match &self.bands {
            BandSource::Named(_) => default_bands().bands,
            BandSource::List(list) => list.clone(),
        };
        FilterbankConfig {
            bands,
            sample_rate_hz,
            truncation_sigmas: self.truncation_sigmas,
        }
    }

    pub fn hist_config(&self, sample_rate_hz: f64) -> HistogramConfig {
        HistogramConfig {
            n_bins: self.hist.n_bins,
            f_min_hz: self.hist.f_min_hz,
            f_max_hz: self.hist.f_max_hz.unwrap_or(sample_rate_hz / 2.0),
            smoothing_alpha: self.hist.smoothing_alpha,
        }
    }

    pub fn pipeline(&self, sample_rate_hz: f64) -> Result<FeaturePipeline, CliError> {
        FeaturePipeline::new(
            self.filterbank(sample_rate_hz),
            self.hist_config(sample_rate_hz),
            DesaOptions {
                smooth_teo_len: self.smooth_teo_len,
            },
        )
        .map_err(from_classifier)
    }
}
