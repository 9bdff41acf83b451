//! WAV and label-file ingestion, and cutting of labeled fixed-length segments.
//!
//! Only RIFF/WAVE files with a PCM (format tag 1), 16-bit, single-channel
//! `fmt ` chunk are accepted. Samples are scaled to `[-1, 1)` by dividing by
//! 32768.
//!
//! Label files are UTF-8 text with one `start_sec,end_sec,TAG` record per
//! line, where `TAG` is exactly `V` or `M`. Blank lines and lines starting
//! with `#` are ignored.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::signal::{SampledSignal, SignalError, Tag};

#[derive(Debug, Error)]
pub enum WaveError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("not a RIFF/WAVE file")]
    NotWav,
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("truncated WAV file: {0}")]
    TruncatedFile(String),
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("labels overlap: {first_end_s} s > {second_start_s} s (line {line})")]
    OverlapError {
        line: usize,
        first_end_s: f64,
        second_start_s: f64,
    },
    #[error("label file contains no labels")]
    EmptyLabelFile,
    #[error("label ending at {end_s} s exceeds signal duration {duration_s} s")]
    LabelBeyondSignal { end_s: f64, duration_s: f64 },
    #[error("invalid segment length {segment_len_s} s / tail {min_tail_s} s")]
    InvalidSegmentLength { segment_len_s: f64, min_tail_s: f64 },
    #[error("sample rate {0} Hz cannot be stored in a WAV header")]
    UnrepresentableSampleRate(f64),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

impl WaveError {
    fn io(path: &Path, source: io::Error) -> Self {
        WaveError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// One manually tagged region of an audio file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentLabel {
    pub start_s: f64,
    pub end_s: f64,
    pub tag: Tag,
}

/// A fixed-length slice of audio that inherits the tag of its region.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSegment {
    pub signal: SampledSignal,
    pub tag: Tag,
    pub source_id: String,
    pub start_s: f64,
}

const PCM_FORMAT_TAG: u16 = 1;

pub fn read_wav(path: impl AsRef<Path>) -> Result<SampledSignal, WaveError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| WaveError::io(path, e))?;
    decode_wav(&bytes)
}

fn le_u16(b: &[u8]) -> u16 {
    u16::from_le_bytes([b[0], b[1]])
}

fn le_u32(b: &[u8]) -> u32 {
    u32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

/// Decodes an in-memory WAV image.
pub fn decode_wav(bytes: &[u8]) -> Result<SampledSignal, WaveError> {
    if bytes.len() < 12 {
        if bytes.len() >= 4 && &bytes[0..4] != b"RIFF" {
            return Err(WaveError::NotWav);
        }
        return Err(WaveError::TruncatedFile("RIFF header shorter than 12 bytes".into()));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WaveError::NotWav);
    }

    let mut pos = 12;
    let mut sample_rate = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = le_u32(&bytes[pos + 4..pos + 8]) as usize;
        let body_start = pos + 8;
        let body_end = body_start.saturating_add(size);
        match id {
            b"fmt " => {
                if size < 16 || body_end > bytes.len() {
                    return Err(WaveError::TruncatedFile("fmt chunk".into()));
                }
                let body = &bytes[body_start..body_end];
                let format_tag = le_u16(&body[0..2]);
                let channels = le_u16(&body[2..4]);
                let rate = le_u32(&body[4..8]);
                let bits = le_u16(&body[14..16]);
                if format_tag != PCM_FORMAT_TAG {
                    return Err(WaveError::UnsupportedFormat(format!(
                        "format tag {format_tag:#06x} (only PCM is supported)"
                    )));
                }
                if channels != 1 {
                    return Err(WaveError::UnsupportedFormat(format!(
                        "{channels} channels (only mono is supported)"
                    )));
                }
                if bits != 16 {
                    return Err(WaveError::UnsupportedFormat(format!(
                        "{bits} bits per sample (only 16 is supported)"
                    )));
                }
                if rate == 0 {
                    return Err(WaveError::UnsupportedFormat("zero sample rate".into()));
                }
                sample_rate = Some(rate);
            }
            b"data" => {
                let Some(rate) = sample_rate else {
                    return Err(WaveError::UnsupportedFormat(
                        "data chunk precedes fmt chunk".into(),
                    ));
                };
                if body_end > bytes.len() || !size.is_multiple_of(2) {
                    return Err(WaveError::TruncatedFile(format!(
                        "data chunk declares {size} bytes, {} available",
                        bytes.len() - body_start
                    )));
                }
                let samples = bytes[body_start..body_end]
                    .chunks_exact(2)
                    .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
                    .collect();
                return Ok(SampledSignal::new_unchecked(samples, rate as f64));
            }
            _ => {}
        }
        // Chunks are word aligned.
        pos = body_end.saturating_add(size & 1);
    }
    Err(WaveError::TruncatedFile("no data chunk".into()))
}

/// Encodes a signal as 16-bit PCM mono. Samples are rounded to the nearest
/// multiple of 1/32768 and saturated to the i16 range.
pub fn encode_wav(signal: &SampledSignal) -> Result<Vec<u8>, WaveError> {
    let rate = signal.sample_rate_hz();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(WaveError::UnrepresentableSampleRate(rate));
    }
    let rate = rate as u32;
    let data_len = signal.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT_TAG.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in signal.samples() {
        let q = (s * 32768.0).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    Ok(out)
}

pub fn write_wav(path: impl AsRef<Path>, signal: &SampledSignal) -> Result<(), WaveError> {
    let path = path.as_ref();
    let bytes = encode_wav(signal)?;
    fs::write(path, bytes).map_err(|e| WaveError::io(path, e))
}

pub fn parse_labels(path: impl AsRef<Path>) -> Result<Vec<SegmentLabel>, WaveError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| WaveError::io(path, e))?;
    parse_labels_str(&text)
}

pub fn parse_labels_str(text: &str) -> Result<Vec<SegmentLabel>, WaveError> {
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| WaveError::ParseError {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(format!(
                "expected `start,end,TAG`, found {} fields",
                fields.len()
            )));
        }
        let parse_time = |s: &str, what: &str| -> Result<f64, WaveError> {
            let v: f64 = s
                .parse()
                .map_err(|_| err(format!("invalid {what} time `{s}`")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(err(format!("{what} time must be finite and >= 0, got {s}")));
            }
            Ok(v)
        };
        let start_s = parse_time(fields[0], "start")?;
        let end_s = parse_time(fields[1], "end")?;
        if end_s <= start_s {
            return Err(err(format!("end {end_s} must exceed start {start_s}")));
        }
        let tag = Tag::from_code(fields[2])
            .ok_or_else(|| err(format!("tag must be `V` or `M`, found `{}`", fields[2])))?;
        labels.push((line_no, SegmentLabel { start_s, end_s, tag }));
    }
    if labels.is_empty() {
        return Err(WaveError::EmptyLabelFile);
    }
    labels.sort_by(|a, b| a.1.start_s.total_cmp(&b.1.start_s));
    for pair in labels.windows(2) {
        let (_, first) = pair[0];
        let (line, second) = pair[1];
        if first.end_s > second.start_s {
            return Err(WaveError::OverlapError {
                line,
                first_end_s: first.end_s,
                second_start_s: second.start_s,
            });
        }
    }
    Ok(labels.into_iter().map(|(_, l)| l).collect())
}

pub fn format_labels(labels: &[SegmentLabel]) -> String {
    let mut out = String::new();
    for l in labels {
        out.push_str(&format!("{},{},{}\n", l.start_s, l.end_s, l.tag.code()));
    }
    out
}

pub fn write_labels(path: impl AsRef<Path>, labels: &[SegmentLabel]) -> Result<(), WaveError> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| WaveError::io(path, e))?;
    file.write_all(format_labels(labels).as_bytes())
        .map_err(|e| WaveError::io(path, e))
}

fn window_len(segment_len_s: f64, sample_rate_hz: f64) -> usize {
    (segment_len_s * sample_rate_hz).round() as usize
}

fn check_lengths(segment_len_s: f64, min_tail_s: f64) -> Result<(), WaveError> {
    if !(segment_len_s.is_finite() && segment_len_s > 0.0 && min_tail_s.is_finite() && min_tail_s >= 0.0)
    {
        return Err(WaveError::InvalidSegmentLength {
            segment_len_s,
            min_tail_s,
        });
    }
    Ok(())
}

/// Splits every labeled region into consecutive full windows of
/// `segment_len_s`.
///
/// A remainder shorter than a full window is always dropped, whatever its
/// length relative to `min_tail_s`; the parameter is validated and kept so
/// configurations stay forward compatible.
pub fn extract_segments(
    signal: &SampledSignal,
    labels: &[SegmentLabel],
    segment_len_s: f64,
    min_tail_s: f64,
    source_id: &str,
) -> Result<Vec<LabeledSegment>, WaveError> {
    check_lengths(segment_len_s, min_tail_s)?;
    let fs = signal.sample_rate_hz();
    let window = window_len(segment_len_s, fs);
    if window == 0 {
        return Err(WaveError::InvalidSegmentLength {
            segment_len_s,
            min_tail_s,
        });
    }
    let duration_s = signal.duration_s();
    let mut segments = Vec::new();
    for label in labels {
        let end = (label.end_s * fs).round() as usize;
        if end > signal.len() {
            return Err(WaveError::LabelBeyondSignal {
                end_s: label.end_s,
                duration_s,
            });
        }
        let mut offset = (label.start_s * fs).round() as usize;
        while offset + window <= end {
            segments.push(LabeledSegment {
                signal: signal.slice(offset, offset + window),
                tag: label.tag,
                source_id: source_id.to_string(),
                start_s: offset as f64 / fs,
            });
            offset += window;
        }
    }
    Ok(segments)
}

/// Cuts an unlabeled signal into a non-overlapping grid of full windows.
/// Returns `(start_s, window)` pairs.
pub fn grid_segments(
    signal: &SampledSignal,
    segment_len_s: f64,
) -> Result<Vec<(f64, SampledSignal)>, WaveError> {
    check_lengths(segment_len_s, 0.0)?;
    let fs = signal.sample_rate_hz();
    let window = window_len(segment_len_s, fs);
    if window == 0 {
        return Err(WaveError::InvalidSegmentLength {
            segment_len_s,
            min_tail_s: 0.0,
        });
    }
    Ok((0..signal.len() / window)
        .map(|i| {
            let start = i * window;
            (start as f64 / fs, signal.slice(start, start + window))
        })
        .collect())
}
