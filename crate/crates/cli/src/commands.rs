use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use modsep::classifier::cross_validate;
use modsep::gabor::BandSpec;
use modsep::synth::gen_corpus;
use modsep::wave_io::{extract_segments, grid_segments, parse_labels, read_wav, write_labels, write_wav};
use modsep::{
    ClassifierError, CrossValidation, FeaturePipeline, HistogramConfig, LabeledSegment, ReferenceModel,
    SegmentLabel, Tag,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{from_classifier, CliError};

pub const FORMAT_VERSION: u32 = 1;

/// Audio files with their label files, paired by position or by stem.
pub struct InputSet {
    pub pairs: Vec<(PathBuf, PathBuf)>,
}

impl InputSet {
    pub fn resolve(audio: &[PathBuf], labels: &[PathBuf], dir: Option<&Path>) -> Result<Self, CliError> {
        if audio.len() != labels.len() {
            return Err(CliError::Usage(format!(
                "{} --audio paths but {} --labels paths",
                audio.len(),
                labels.len()
            )));
        }
        let mut pairs: Vec<(PathBuf, PathBuf)> = audio.iter().cloned().zip(labels.iter().cloned()).collect();
        if let Some(dir) = dir {
            let entries = fs::read_dir(dir).map_err(|e| CliError::Format {
                path: dir.to_path_buf(),
                message: e.to_string(),
            })?;
            let mut wavs: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
                .collect();
            wavs.sort();
            for wav in wavs {
                let csv = wav.with_extension("csv");
                if !csv.exists() {
                    return Err(CliError::Format {
                        path: csv,
                        message: format!("no label file for {}", wav.display()),
                    });
                }
                pairs.push((wav, csv));
            }
        }
        if pairs.is_empty() {
            return Err(CliError::Usage("no input audio given (use --audio/--labels or --dir)".into()));
        }
        Ok(Self { pairs })
    }

    /// Loads and cuts every pair; all files must share one sample rate.
    pub fn segments(&self, cfg: &RunConfig) -> Result<(Vec<LabeledSegment>, f64), CliError> {
        let mut out = Vec::new();
        let mut rate: Option<(f64, &Path)> = None;
        for (wav, csv) in &self.pairs {
            let signal = read_wav(wav).map_err(|source| CliError::Input { path: wav.clone(), source })?;
            let labels = parse_labels(csv).map_err(|source| CliError::Input { path: csv.clone(), source })?;
            match rate {
                None => rate = Some((signal.sample_rate_hz(), wav)),
                Some((fs, first)) if fs != signal.sample_rate_hz() => {
                    return Err(CliError::Mismatch(format!(
                        "{} is at {} Hz but {} is at {fs} Hz",
                        wav.display(),
                        signal.sample_rate_hz(),
                        first.display()
                    )))
                }
                Some(_) => {}
            }
            let segs = extract_segments(&signal, &labels, cfg.segment_len_s, cfg.min_tail_s, &source_id(wav))
                .map_err(|source| CliError::Input { path: csv.clone(), source })?;
            out.extend(segs);
        }
        Ok((out, rate.expect("at least one pair").0))
    }
}

fn source_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn segment_error(seg: &LabeledSegment, e: ClassifierError) -> CliError {
    if e.is_degenerate() || matches!(e, ClassifierError::Esa(_)) {
        CliError::Segment {
            source_id: seg.source_id.clone(),
            start_s: seg.start_s,
            source: e,
        }
    } else {
        from_classifier(e)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::write(path, e))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::write(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct Manifest {
    version: u32,
    sample_rate_hz: f64,
    segment_len_s: f64,
    bands: Vec<BandSpec>,
    hist: HistogramConfig,
    segments: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    index: usize,
    source: String,
    start_s: f64,
    tag: Tag,
    histograms: Vec<String>,
    sample_counts: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tracks: Vec<String>,
}

pub fn extract(inputs: &InputSet, out: &Path, tracks: bool, cfg: &RunConfig) -> Result<usize, CliError> {
    let (segments, fs) = inputs.segments(cfg)?;
    let pipeline = cfg.pipeline(fs)?;
    create_dir(out)?;
    let mut entries = Vec::with_capacity(segments.len());
    for (index, seg) in segments.iter().enumerate() {
        let hists = pipeline.featurize(&seg.signal).map_err(|e| segment_error(seg, e))?;
        let mut entry = ManifestEntry {
            index,
            source: seg.source_id.clone(),
            start_s: seg.start_s,
            tag: seg.tag,
            histograms: Vec::new(),
            sample_counts: hists.iter().map(|h| h.sample_count()).collect(),
            tracks: Vec::new(),
        };
        for (band, h) in hists.iter().enumerate() {
            let name = format!("seg{index:05}_band{band}.csv");
            write_file(&out.join(&name), &h.to_csv())?;
            entry.histograms.push(name);
        }
        if tracks {
            let demod = pipeline.demodulate(&seg.signal).map_err(|e| segment_error(seg, e))?;
            for (band, t) in demod.iter().enumerate() {
                let name = format!("seg{index:05}_band{band}_track.csv");
                let mut text = String::from("n,inst_freq_hz,inst_amp,valid\n");
                for n in 0..t.len() {
                    let _ = writeln!(
                        text,
                        "{n},{},{},{}",
                        t.inst_freq_hz()[n],
                        t.inst_amp()[n],
                        u8::from(t.valid()[n])
                    );
                }
                write_file(&out.join(&name), &text)?;
                entry.tracks.push(name);
            }
        }
        entries.push(entry);
    }
    let manifest = Manifest {
        version: FORMAT_VERSION,
        sample_rate_hz: fs,
        segment_len_s: cfg.segment_len_s,
        bands: pipeline.filterbank().bands.clone(),
        hist: *pipeline.hist_config(),
        segments: entries,
    };
    write_file(&out.join("manifest.json"), &to_json(&manifest)?)?;
    Ok(segments.len())
}

pub fn build_ref(inputs: &InputSet, out: &Path, cfg: &RunConfig) -> Result<ReferenceModel, CliError> {
    let (segments, fs) = inputs.segments(cfg)?;
    let pipeline = cfg.pipeline(fs)?;
    let model = ReferenceModel::build(&segments, &pipeline).map_err(|e| match e {
        e @ ClassifierError::MissingClass(_) => CliError::Training(e),
        e => blame_segment(&segments, &pipeline).unwrap_or_else(|| from_classifier(e)),
    })?;
    write_file(out, &model.to_json())?;
    Ok(model)
}

/// Finds the first segment that cannot be featurized, to name it in the error.
fn blame_segment(segments: &[LabeledSegment], pipeline: &FeaturePipeline) -> Option<CliError> {
    segments
        .iter()
        .find_map(|s| pipeline.featurize(&s.signal).err().map(|e| segment_error(s, e)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandScore {
    pub d_voice: f64,
    pub d_music: f64,
}

/// One classified segment. Scores are absent when the segment had no usable
/// samples in some band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub source: String,
    pub start_s: f64,
    pub label: Option<Tag>,
    pub predicted: Option<Tag>,
    pub score_voice: Option<f64>,
    pub score_music: Option<f64>,
    pub per_band: Vec<BandScore>,
}

#[derive(Serialize)]
struct ClassReport<'a> {
    version: u32,
    segments: &'a [ClassRow],
}

pub fn load_model(path: &Path) -> Result<ReferenceModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    ReferenceModel::from_json(&text).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn classify(
    audio: &[PathBuf],
    labels: &[PathBuf],
    model_path: &Path,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Vec<ClassRow>, CliError> {
    if audio.is_empty() {
        return Err(CliError::Usage("no --audio given".into()));
    }
    if !labels.is_empty() && labels.len() != audio.len() {
        return Err(CliError::Usage(format!(
            "{} --audio paths but {} --labels paths",
            audio.len(),
            labels.len()
        )));
    }
    let model = load_model(model_path)?;
    let model_fs = model.pipeline().sample_rate_hz();
    let mut rows = Vec::new();
    for (i, wav) in audio.iter().enumerate() {
        let signal = read_wav(wav).map_err(|source| CliError::Input { path: wav.clone(), source })?;
        if signal.sample_rate_hz() != model_fs {
            return Err(CliError::Mismatch(format!(
                "{} is at {} Hz but the model was built at {model_fs} Hz",
                wav.display(),
                signal.sample_rate_hz()
            )));
        }
        let id = source_id(wav);
        let segments: Vec<LabeledSegment> = match labels.get(i) {
            Some(csv) => {
                let l = parse_labels(csv).map_err(|source| CliError::Input { path: csv.clone(), source })?;
                extract_segments(&signal, &l, cfg.segment_len_s, cfg.min_tail_s, &id)
                    .map_err(|source| CliError::Input { path: csv.clone(), source })?
            }
            None => grid_segments(&signal, cfg.segment_len_s)
                .map_err(|source| CliError::Input { path: wav.clone(), source })?
                .into_iter()
                .map(|(start_s, signal)| LabeledSegment {
                    signal,
                    // Placeholder only; unlabeled rows report no label.
                    tag: Tag::Music,
                    source_id: id.clone(),
                    start_s,
                })
                .collect(),
        };
        let labeled = labels.get(i).is_some();
        for seg in &segments {
            let mut row = ClassRow {
                source: seg.source_id.clone(),
                start_s: seg.start_s,
                label: labeled.then_some(seg.tag),
                predicted: None,
                score_voice: None,
                score_music: None,
                per_band: Vec::new(),
            };
            match model.classify(&seg.signal) {
                Ok(r) => {
                    row.predicted = Some(r.predicted);
                    row.score_voice = Some(r.score_voice);
                    row.score_music = Some(r.score_music);
                    row.per_band = r.per_band.iter().map(|&(d_voice, d_music)| BandScore { d_voice, d_music }).collect();
                }
                Err(e) if e.is_degenerate() || matches!(e, ClassifierError::Esa(_)) => {
                    eprintln!("warning: {}", segment_error(seg, e));
                }
                Err(e) => return Err(from_classifier(e)),
            }
            rows.push(row);
        }
    }
    let n_bands = model.p_voice().len();
    let text = match out {
        Some(p) if p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")) => rows_csv(&rows, n_bands),
        _ => to_json(&ClassReport {
            version: FORMAT_VERSION,
            segments: &rows,
        })?,
    };
    match out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(rows)
}

fn rows_csv(rows: &[ClassRow], n_bands: usize) -> String {
    let mut s = String::from("source,start_s,label,predicted,score_voice,score_music");
    for b in 0..n_bands {
        let _ = write!(s, ",d_voice_{b},d_music_{b}");
    }
    s.push('\n');
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let tag = |t: Option<Tag>| t.map(|t| t.code().to_string()).unwrap_or_default();
    for r in rows {
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            r.source,
            r.start_s,
            tag(r.label),
            tag(r.predicted),
            opt(r.score_voice),
            opt(r.score_music)
        );
        if r.per_band.is_empty() {
            s.push_str(&",".repeat(2 * n_bands));
        }
        for b in &r.per_band {
            let _ = write!(s, ",{},{}", b.d_voice, b.d_music);
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct Accuracy {
    voice: f64,
    music: f64,
}

#[derive(Serialize)]
struct CvReport<'a> {
    version: u32,
    accuracy: Accuracy,
    table: String,
    #[serde(flatten)]
    cv: &'a CrossValidation,
}

pub fn cross_val(inputs: &InputSet, out: Option<&Path>, cfg: &RunConfig) -> Result<CrossValidation, CliError> {
    let (segments, fs) = inputs.segments(cfg)?;
    let pipeline = cfg.pipeline(fs)?;
    let cv = cross_validate(&segments, &pipeline, cfg.k_folds, cfg.seed).map_err(from_classifier)?;
    let table = cv.aggregate.table();
    print!("{table}");
    println!(
        "accuracy: Voice {:.1} %, Music {:.1} % ({} folds, seed {})",
        100.0 * cv.accuracy(Tag::Voice),
        100.0 * cv.accuracy(Tag::Music),
        cv.k,
        cv.seed
    );
    if let Some(out) = out {
        let report = CvReport {
            version: FORMAT_VERSION,
            accuracy: Accuracy {
                voice: cv.accuracy(Tag::Voice),
                music: cv.accuracy(Tag::Music),
            },
            table,
            cv: &cv,
        };
        write_file(out, &to_json(&report)?)?;
    }
    Ok(cv)
}

pub fn synth_corpus(
    n_voice: usize,
    n_music: usize,
    sample_rate_hz: f64,
    out: &Path,
    cfg: &RunConfig,
) -> Result<usize, CliError> {
    let corpus = gen_corpus(n_voice, n_music, cfg.segment_len_s, sample_rate_hz, cfg.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(out)?;
    for seg in &corpus {
        let wav = out.join(format!("{}.wav", seg.source_id));
        write_wav(&wav, &seg.signal).map_err(|source| CliError::Input { path: wav.clone(), source })?;
        let csv = wav.with_extension("csv");
        let label = SegmentLabel {
            start_s: 0.0,
            end_s: seg.signal.duration_s(),
            tag: seg.tag,
        };
        write_labels(&csv, &[label]).map_err(|source| CliError::Input { path: csv.clone(), source })?;
    }
    Ok(corpus.len())
}
