//! Reference-distribution classifier and k-fold evaluation.
//!
//! Each segment is reduced to one instantaneous-frequency histogram per
//! Gabor band. A [`ReferenceModel`] pools the histograms of its Voice and
//! Music reference segments band by band. A test segment with histograms
//! `p_T[b]` scores `sum_b D(p_voice[b] || p_T[b])` against Voice and the same
//! sum with `p_music` against Music; the smaller score wins and exact ties go
//! to Music.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::esa::{desa1_with, DemodTrack, DesaOptions, EsaError};
use crate::gabor::{BandSpec, FilterbankConfig, GaborBand, GaborError};
use crate::histogram::{accumulate, build_histogram, kl_divergence, FreqHistogram, HistogramConfig, HistogramError};
use crate::signal::{SampledSignal, Tag};
use crate::wave_io::LabeledSegment;

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error(transparent)]
    Gabor(#[from] GaborError),
    #[error(transparent)]
    Esa(#[from] EsaError),
    #[error(transparent)]
    Histogram(#[from] HistogramError),
    #[error("band {band} ({center_hz} Hz) has no valid instantaneous-frequency samples")]
    NoValidSamples { band: usize, center_hz: f64 },
    #[error("no {0} segments to build a reference from")]
    MissingClass(Tag),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("{tag}: {have} segments, at least {need} required for {need}-fold validation")]
    NotEnoughSegments { tag: Tag, have: usize, need: usize },
    #[error("invalid fold count {0}, need at least 2")]
    InvalidFoldCount(usize),
    #[error("invalid model document: {0}")]
    ModelFormat(String),
}

impl ClassifierError {
    /// True when a segment failed only because it carried no usable signal.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, ClassifierError::NoValidSamples { .. })
    }
}

/// Filterbank, demodulator and binning settings, with the kernels prebuilt.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePipeline {
    filterbank: FilterbankConfig,
    hist: HistogramConfig,
    desa: DesaOptions,
    kernels: Vec<GaborBand>,
}

impl FeaturePipeline {
    pub fn new(
        filterbank: FilterbankConfig,
        hist: HistogramConfig,
        desa: DesaOptions,
    ) -> Result<Self, ClassifierError> {
        let kernels = filterbank.build()?;
        hist.validate()?;
        desa.validate()?;
        Ok(Self {
            filterbank,
            hist,
            desa,
            kernels,
        })
    }

    pub fn filterbank(&self) -> &FilterbankConfig {
        &self.filterbank
    }

    pub fn hist_config(&self) -> &HistogramConfig {
        &self.hist
    }

    pub fn desa_options(&self) -> &DesaOptions {
        &self.desa
    }

    pub fn kernels(&self) -> &[GaborBand] {
        &self.kernels
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.filterbank.sample_rate_hz
    }

    fn check_rate(&self, signal: &SampledSignal) -> Result<(), ClassifierError> {
        if signal.sample_rate_hz() != self.sample_rate_hz() {
            return Err(GaborError::SampleRateMismatch {
                signal_hz: signal.sample_rate_hz(),
                band_hz: self.sample_rate_hz(),
            }
            .into());
        }
        Ok(())
    }

    /// Bandpass and demodulate every band. Filter transients (`half_len`
    /// samples at each end) are masked.
    pub fn demodulate(&self, signal: &SampledSignal) -> Result<Vec<DemodTrack>, ClassifierError> {
        self.check_rate(signal)?;
        self.kernels
            .iter()
            .map(|band| {
                let filtered = band.bandpass(signal)?;
                let mut track = desa1_with(filtered.samples(), signal.sample_rate_hz(), &self.desa)?;
                track.invalidate_edges(band.half_len());
                Ok(track)
            })
            .collect()
    }

    /// One instantaneous-frequency histogram per band, in band order.
    pub fn featurize(&self, signal: &SampledSignal) -> Result<Vec<FreqHistogram>, ClassifierError> {
        self.demodulate(signal)?
            .iter()
            .enumerate()
            .map(|(band, track)| {
                build_histogram(track, &self.hist).map_err(|e| match e {
                    HistogramError::NoValidSamples => ClassifierError::NoValidSamples {
                        band,
                        center_hz: self.filterbank.bands[band].center_hz,
                    },
                    other => other.into(),
                })
            })
            .collect()
    }

    fn featurize_all(
        &self,
        segments: &[LabeledSegment],
    ) -> Vec<Result<Vec<FreqHistogram>, ClassifierError>> {
        segments
            .par_iter()
            .map(|s| self.featurize(&s.signal))
            .collect()
    }
}

/// Featurizes with the default (unsmoothed) demodulator.
pub fn featurize(
    signal: &SampledSignal,
    bands: &FilterbankConfig,
    hist_config: &HistogramConfig,
) -> Result<Vec<FreqHistogram>, ClassifierError> {
    FeaturePipeline::new(bands.clone(), *hist_config, DesaOptions::default())?.featurize(signal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub voice: usize,
    pub music: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceModel {
    pipeline: FeaturePipeline,
    p_voice: Vec<FreqHistogram>,
    p_music: Vec<FreqHistogram>,
    provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub predicted: Tag,
    pub score_voice: f64,
    pub score_music: f64,
    /// `(D_voice, D_music)` for every band.
    pub per_band: Vec<(f64, f64)>,
}

fn pool(features: &[&Vec<FreqHistogram>], n_bands: usize) -> Result<Vec<FreqHistogram>, ClassifierError> {
    (0..n_bands)
        .map(|b| {
            let band: Vec<FreqHistogram> = features.iter().map(|f| f[b].clone()).collect();
            Ok(accumulate(&band)?)
        })
        .collect()
}

impl ReferenceModel {
    /// Pools every segment's histograms by tag.
    pub fn build(
        segments: &[LabeledSegment],
        pipeline: &FeaturePipeline,
    ) -> Result<Self, ClassifierError> {
        for tag in Tag::ALL {
            if !segments.iter().any(|s| s.tag == tag) {
                return Err(ClassifierError::MissingClass(tag));
            }
        }
        let features = pipeline.featurize_all(segments);
        let mut voice = Vec::new();
        let mut music = Vec::new();
        for (seg, feat) in segments.iter().zip(features) {
            let feat = feat?;
            match seg.tag {
                Tag::Voice => voice.push(feat),
                Tag::Music => music.push(feat),
            }
        }
        Self::from_features(pipeline, &voice.iter().collect::<Vec<_>>(), &music.iter().collect::<Vec<_>>())
    }

    /// Builds a model from already featurized reference segments.
    pub fn from_features(
        pipeline: &FeaturePipeline,
        voice: &[&Vec<FreqHistogram>],
        music: &[&Vec<FreqHistogram>],
    ) -> Result<Self, ClassifierError> {
        if voice.is_empty() {
            return Err(ClassifierError::MissingClass(Tag::Voice));
        }
        if music.is_empty() {
            return Err(ClassifierError::MissingClass(Tag::Music));
        }
        let n_bands = pipeline.kernels.len();
        if voice.iter().chain(music).any(|f| f.len() != n_bands) {
            return Err(ClassifierError::ConfigMismatch(format!(
                "expected {n_bands} bands per segment"
            )));
        }
        Ok(Self {
            pipeline: pipeline.clone(),
            p_voice: pool(voice, n_bands)?,
            p_music: pool(music, n_bands)?,
            provenance: Provenance {
                voice: voice.len(),
                music: music.len(),
            },
        })
    }

    pub fn pipeline(&self) -> &FeaturePipeline {
        &self.pipeline
    }

    pub fn p_voice(&self) -> &[FreqHistogram] {
        &self.p_voice
    }

    pub fn p_music(&self) -> &[FreqHistogram] {
        &self.p_music
    }

    pub fn reference(&self, tag: Tag) -> &[FreqHistogram] {
        match tag {
            Tag::Voice => &self.p_voice,
            Tag::Music => &self.p_music,
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn classify(&self, signal: &SampledSignal) -> Result<ClassificationResult, ClassifierError> {
        let features = self.pipeline.featurize(signal)?;
        self.classify_features(&features)
    }

    pub fn classify_features(
        &self,
        features: &[FreqHistogram],
    ) -> Result<ClassificationResult, ClassifierError> {
        if features.len() != self.p_voice.len() {
            return Err(ClassifierError::ConfigMismatch(format!(
                "{} band histograms for a {}-band model",
                features.len(),
                self.p_voice.len()
            )));
        }
        let per_band = features
            .iter()
            .zip(self.p_voice.iter().zip(&self.p_music))
            .map(|(test, (v, m))| Ok((kl_divergence(v, test)?, kl_divergence(m, test)?)))
            .collect::<Result<Vec<_>, HistogramError>>()?;
        let score_voice = per_band.iter().map(|d| d.0).sum();
        let score_music = per_band.iter().map(|d| d.1).sum();
        Ok(ClassificationResult {
            predicted: decide(score_voice, score_music),
            score_voice,
            score_music,
            per_band,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            version: MODEL_VERSION,
            sample_rate_hz: self.pipeline.filterbank.sample_rate_hz,
            truncation_sigmas: self.pipeline.filterbank.truncation_sigmas,
            bands: self.pipeline.filterbank.bands.clone(),
            hist_config: self.pipeline.hist,
            smooth_teo_len: self.pipeline.desa.smooth_teo_len,
            p_voice: self.p_voice.iter().map(|h| h.probs().to_vec()).collect(),
            p_music: self.p_music.iter().map(|h| h.probs().to_vec()).collect(),
            voice_sample_counts: self.p_voice.iter().map(|h| h.sample_count()).collect(),
            music_sample_counts: self.p_music.iter().map(|h| h.sample_count()).collect(),
            provenance: self.provenance,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("model document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| ClassifierError::ModelFormat(e.to_string()))?;
        if doc.version != MODEL_VERSION {
            return Err(ClassifierError::ModelFormat(format!(
                "unsupported version {}",
                doc.version
            )));
        }
        let pipeline = FeaturePipeline::new(
            FilterbankConfig {
                bands: doc.bands,
                sample_rate_hz: doc.sample_rate_hz,
                truncation_sigmas: doc.truncation_sigmas,
            },
            doc.hist_config,
            DesaOptions {
                smooth_teo_len: doc.smooth_teo_len,
            },
        )?;
        let n_bands = pipeline.kernels.len();
        let rebuild = |probs: Vec<Vec<f64>>, counts: Vec<u64>, what: &str| {
            if probs.len() != n_bands || counts.len() != n_bands {
                return Err(ClassifierError::ModelFormat(format!(
                    "{what} needs {n_bands} bands"
                )));
            }
            probs
                .into_iter()
                .zip(counts)
                .map(|(p, c)| {
                    FreqHistogram::from_parts(p, doc.hist_config, c)
                        .map_err(|e| ClassifierError::ModelFormat(format!("{what}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let p_voice = rebuild(doc.p_voice, doc.voice_sample_counts, "p_voice")?;
        let p_music = rebuild(doc.p_music, doc.music_sample_counts, "p_music")?;
        if doc.provenance.voice == 0 || doc.provenance.music == 0 {
            return Err(ClassifierError::ModelFormat(
                "provenance must count at least one segment per tag".into(),
            ));
        }
        Ok(Self {
            pipeline,
            p_voice,
            p_music,
            provenance: doc.provenance,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    version: u32,
    sample_rate_hz: f64,
    truncation_sigmas: f64,
    bands: Vec<BandSpec>,
    hist_config: HistogramConfig,
    smooth_teo_len: usize,
    p_voice: Vec<Vec<f64>>,
    p_music: Vec<Vec<f64>>,
    voice_sample_counts: Vec<u64>,
    music_sample_counts: Vec<u64>,
    provenance: Provenance,
}

/// Voice iff its score is strictly smaller.
pub fn decide(score_voice: f64, score_music: f64) -> Tag {
    if score_voice < score_music {
        Tag::Voice
    } else {
        Tag::Music
    }
}

pub fn build_reference(
    segments: &[LabeledSegment],
    bands: &FilterbankConfig,
    hist_config: &HistogramConfig,
) -> Result<ReferenceModel, ClassifierError> {
    let pipeline = FeaturePipeline::new(bands.clone(), *hist_config, DesaOptions::default())?;
    ReferenceModel::build(segments, &pipeline)
}

pub fn classify(
    segment: &LabeledSegment,
    model: &ReferenceModel,
) -> Result<ClassificationResult, ClassifierError> {
    model.classify(&segment.signal)
}

/// Counts indexed by `(true tag, predicted tag)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: Tag, predicted: Tag) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn get(&self, truth: Tag, predicted: Tag) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn row_sum(&self, truth: Tag) -> u64 {
        self.counts[truth.index()].iter().sum()
    }

    pub fn correct(&self, truth: Tag) -> u64 {
        self.get(truth, truth)
    }

    /// Fraction of `truth` segments recognized correctly; 0 for an empty row.
    pub fn accuracy(&self, truth: Tag) -> f64 {
        let n = self.row_sum(truth);
        if n == 0 {
            0.0
        } else {
            self.correct(truth) as f64 / n as f64
        }
    }

    pub fn total(&self) -> u64 {
        Tag::ALL.iter().map(|&t| self.row_sum(t)).sum()
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (row, orow) in self.counts.iter_mut().zip(&other.counts) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
    }

    /// Plain-text table with segment, misrecognized and correct counts per
    /// class.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} | {:>8} | {:>13} | {:>20}",
            "", "Segments", "Misrecognised", "Correct Recognitions"
        );
        let _ = writeln!(out, "{}", "-".repeat(62));
        for (tag, name) in [(Tag::Voice, "Vocal (V)"), (Tag::Music, "Music (M)")] {
            let n = self.row_sum(tag);
            let ok = self.correct(tag);
            let _ = writeln!(
                out,
                "{:<10} | {:>8} | {:>13} | {:>20}",
                name,
                n,
                n - ok,
                format!("{ok} ({:.1} %)", 100.0 * self.accuracy(tag))
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub reference_voice: usize,
    pub reference_music: usize,
    pub tested_voice: usize,
    pub tested_music: usize,
    /// Test segments with no usable samples, counted as misrecognized.
    pub degenerate: usize,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub k: usize,
    pub seed: u64,
    pub aggregate: ConfusionMatrix,
    pub folds: Vec<FoldReport>,
    /// Reference segments skipped because they had no usable samples.
    pub skipped_references: usize,
}

impl CrossValidation {
    pub fn accuracy(&self, tag: Tag) -> f64 {
        self.aggregate.accuracy(tag)
    }
}

/// Splits `0..n` into `k` contiguous fold ranges, spreading the remainder
/// over the first folds.
pub fn fold_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// Shuffled, stratified fold assignment: `folds[tag][i]` lists segment
/// indices of `tag` in fold `i`.
pub fn assign_folds(
    segments: &[LabeledSegment],
    k: usize,
    seed: u64,
) -> Result<[Vec<Vec<usize>>; 2], ClassifierError> {
    if k < 2 {
        return Err(ClassifierError::InvalidFoldCount(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: [Vec<Vec<usize>>; 2] = [Vec::new(), Vec::new()];
    for tag in Tag::ALL {
        let mut idx: Vec<usize> = (0..segments.len()).filter(|&i| segments[i].tag == tag).collect();
        if idx.len() < k {
            return Err(ClassifierError::NotEnoughSegments {
                tag,
                have: idx.len(),
                need: k,
            });
        }
        idx.shuffle(&mut rng);
        let mut start = 0;
        for size in fold_sizes(idx.len(), k) {
            out[tag.index()].push(idx[start..start + size].to_vec());
            start += size;
        }
    }
    Ok(out)
}

/// k-fold evaluation where fold `i` of each tag is the reference set and
/// every other segment is tested, so each segment is tested `k - 1` times.
///
/// Segments are featurized once; folds then only pool and compare
/// histograms.
pub fn cross_validate(
    segments: &[LabeledSegment],
    pipeline: &FeaturePipeline,
    k: usize,
    seed: u64,
) -> Result<CrossValidation, ClassifierError> {
    let folds = assign_folds(segments, k, seed)?;
    let features = pipeline.featurize_all(segments);
    for f in &features {
        if let Err(e) = f {
            if !e.is_degenerate() {
                return Err(e.clone());
            }
        }
    }

    let mut aggregate = ConfusionMatrix::default();
    let mut reports = Vec::with_capacity(k);
    let mut skipped_references = 0;
    for fold in 0..k {
        let usable = |tag: Tag| -> Vec<&Vec<FreqHistogram>> {
            folds[tag.index()][fold]
                .iter()
                .filter_map(|&i| features[i].as_ref().ok())
                .collect()
        };
        let voice_ref = usable(Tag::Voice);
        let music_ref = usable(Tag::Music);
        skipped_references += folds[0][fold].len() + folds[1][fold].len() - voice_ref.len() - music_ref.len();
        let model = ReferenceModel::from_features(pipeline, &voice_ref, &music_ref)?;

        let mut confusion = ConfusionMatrix::default();
        let mut degenerate = 0;
        let mut tested = [0usize; 2];
        for tag in Tag::ALL {
            for (other, members) in folds[tag.index()].iter().enumerate() {
                if other == fold {
                    continue;
                }
                for &i in members {
                    tested[tag.index()] += 1;
                    match &features[i] {
                        Ok(f) => confusion.record(tag, model.classify_features(f)?.predicted),
                        Err(_) => {
                            degenerate += 1;
                            confusion.record(tag, tag.other());
                        }
                    }
                }
            }
        }
        aggregate.merge(&confusion);
        reports.push(FoldReport {
            fold,
            reference_voice: folds[0][fold].len(),
            reference_music: folds[1][fold].len(),
            tested_voice: tested[0],
            tested_music: tested[1],
            degenerate,
            confusion,
        });
    }
    Ok(CrossValidation {
        k,
        seed,
        aggregate,
        folds: reports,
        skipped_references,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::default_bands;
    use crate::synth::{gen_am_fm, AmFmParams};

    fn pipeline() -> FeaturePipeline {
        let fb = default_bands();
        FeaturePipeline::new(
            fb.clone(),
            HistogramConfig::for_sample_rate(fb.sample_rate_hz),
            DesaOptions::default(),
        )
        .unwrap()
    }

    fn tone_segment(freq: f64, tag: Tag) -> LabeledSegment {
        let (signal, _) = gen_am_fm(&AmFmParams::tone(0.5, freq, 0.2), 0.5, 22050.0).unwrap();
        LabeledSegment {
            signal,
            tag,
            source_id: format!("{freq}"),
            start_s: 0.0,
        }
    }

    #[test]
    fn fold_arithmetic() {
        assert_eq!(fold_sizes(100, 5), vec![20; 5]);
        assert_eq!(fold_sizes(7, 3), vec![3, 2, 2]);
    }

    #[test]
    fn tie_goes_to_music() {
        assert_eq!(decide(1.0, 1.0), Tag::Music);
        assert_eq!(decide(0.5, 1.0), Tag::Voice);
        assert_eq!(decide(2.0, 1.0), Tag::Music);
    }

    #[test]
    fn band_center_tone_peaks_in_its_bin() {
        let p = pipeline();
        let seg = tone_segment(240.0, Tag::Voice);
        let h = &p.featurize(&seg.signal).unwrap()[0];
        let (lo, hi) = h.config().bin_edges(h.argmax());
        assert!(lo <= 240.0 && 240.0 < hi, "{lo}..{hi}");
    }

    #[test]
    fn silence_is_degenerate() {
        let p = pipeline();
        let z = SampledSignal::new(vec![0.0; 4410], 22050.0).unwrap();
        let err = p.featurize(&z).unwrap_err();
        assert!(err.is_degenerate());
    }

    #[test]
    fn rate_mismatch() {
        let p = pipeline();
        let s = SampledSignal::new(vec![0.1; 1000], 16000.0).unwrap();
        assert!(matches!(
            p.featurize(&s),
            Err(ClassifierError::Gabor(GaborError::SampleRateMismatch { .. }))
        ));
    }

    #[test]
    fn missing_class() {
        let segs = vec![tone_segment(300.0, Tag::Voice)];
        assert_eq!(
            ReferenceModel::build(&segs, &pipeline()),
            Err(ClassifierError::MissingClass(Tag::Music))
        );
    }

    #[test]
    fn self_classification_and_json() {
        let p = pipeline();
        let segs = vec![tone_segment(300.0, Tag::Voice), tone_segment(2500.0, Tag::Music)];
        let model = ReferenceModel::build(&segs, &p).unwrap();
        assert_eq!(model.provenance(), Provenance { voice: 1, music: 1 });
        for s in &segs {
            let r = classify(s, &model).unwrap();
            assert_eq!(r.predicted, s.tag);
            let own = match s.tag {
                Tag::Voice => r.score_voice,
                Tag::Music => r.score_music,
            };
            assert!(own.abs() < 1e-12);
        }
        let back = ReferenceModel::from_json(&model.to_json()).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_json(), model.to_json());
    }

    #[test]
    fn bad_model_documents() {
        assert!(matches!(
            ReferenceModel::from_json("{}"),
            Err(ClassifierError::ModelFormat(_))
        ));
        let p = pipeline();
        let segs = vec![tone_segment(300.0, Tag::Voice), tone_segment(2500.0, Tag::Music)];
        let json = ReferenceModel::build(&segs, &p).unwrap().to_json();
        let v2 = json.replacen("\"version\": 1", "\"version\": 2", 1);
        assert!(matches!(
            ReferenceModel::from_json(&v2),
            Err(ClassifierError::ModelFormat(_))
        ));
    }

    #[test]
    fn not_enough_segments() {
        let segs: Vec<_> = (0..3)
            .map(|i| tone_segment(300.0 + i as f64, Tag::Voice))
            .chain((0..5).map(|i| tone_segment(2000.0 + i as f64, Tag::Music)))
            .collect();
        assert_eq!(
            assign_folds(&segs, 5, 0).unwrap_err(),
            ClassifierError::NotEnoughSegments { tag: Tag::Voice, have: 3, need: 5 }
        );
        assert_eq!(assign_folds(&segs, 1, 0).unwrap_err(), ClassifierError::InvalidFoldCount(1));
    }

    #[test]
    fn confusion_table() {
        let mut c = ConfusionMatrix::default();
        for _ in 0..128 {
            c.record(Tag::Voice, Tag::Voice);
        }
        for _ in 0..22 {
            c.record(Tag::Voice, Tag::Music);
        }
        c.record(Tag::Music, Tag::Music);
        assert_eq!(c.row_sum(Tag::Voice), 150);
        let t = c.table();
        assert!(t.contains("Vocal (V)"));
        assert!(t.contains("128 (85.3 %)"));
        assert!(t.contains("1 (100.0 %)"));
    }
}
