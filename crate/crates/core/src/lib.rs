//! Voice/music discrimination from nonlinear modulation features.
//!
//! The processing chain is:
//!
//! 1. [`wave_io`] reads 16-bit mono WAV audio and `start,end,TAG` label files
//!    and cuts fixed-length labeled segments.
//! 2. [`gabor`] splits every segment into a few Gabor bandpass channels.
//! 3. [`esa`] runs the discrete Teager energy operator and the DESA-1 energy
//!    separation algorithm on each channel, giving per-sample instantaneous
//!    frequency and amplitude.
//! 4. [`histogram`] turns the instantaneous-frequency track of each band into
//!    a smoothed probability histogram and compares histograms with the
//!    Kullback-Leibler divergence.
//! 5. [`classifier`] pools reference histograms per tag, labels test segments
//!    by the smaller summed divergence, and runs k-fold evaluation.
//!
//! [`synth`] generates AM-FM test signals with closed-form ground truth and a
//! synthetic voice/music corpus.

pub mod classifier;
pub mod esa;
pub mod gabor;
pub mod histogram;
pub mod signal;
pub mod synth;
pub mod wave_io;

pub use classifier::{
    ClassificationResult, ClassifierError, ConfusionMatrix, CrossValidation, FeaturePipeline,
    ReferenceModel,
};
pub use esa::{desa1, teo, DemodTrack, DesaOptions, EsaError, TeoTrack};
pub use gabor::{FilterbankConfig, GaborBand, GaborError};
pub use histogram::{FreqHistogram, HistogramConfig, HistogramError};
pub use signal::{SampledSignal, SignalError, Tag};
pub use synth::{AmFmParams, SynthError};
pub use wave_io::{LabeledSegment, SegmentLabel, WaveError};
