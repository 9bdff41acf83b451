use std::path::PathBuf;

use modsep::{ClassifierError, WaveError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}", input_message(path, source))]
    Input {
        path: PathBuf,
        #[source]
        source: WaveError,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Featurizing one segment failed because of its content.
    #[error("{source_id} at {start_s} s: {source}")]
    Segment {
        source_id: String,
        start_s: f64,
        #[source]
        source: ClassifierError,
    },
    #[error("training failed: {0}")]
    Training(ClassifierError),
    #[error("configuration mismatch: {0}")]
    Mismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// I/O errors already carry their path.
fn input_message(path: &std::path::Path, source: &WaveError) -> String {
    match source {
        WaveError::Io { .. } => source.to_string(),
        _ => format!("{}: {source}", path.display()),
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input { .. } | CliError::Format { .. } | CliError::Write { .. } => 2,
            CliError::Segment { .. } => 2,
            CliError::Training(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    pub fn write(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Write {
            path: path.into(),
            source,
        }
    }
}

/// Routes library errors that are not tied to a particular segment.
pub fn from_classifier(e: ClassifierError) -> CliError {
    match e {
        ClassifierError::ConfigMismatch(m) => CliError::Mismatch(m),
        ClassifierError::Gabor(modsep::GaborError::SampleRateMismatch { signal_hz, band_hz }) => {
            CliError::Mismatch(format!("audio at {signal_hz} Hz, model at {band_hz} Hz"))
        }
        ClassifierError::MissingClass(_) | ClassifierError::NotEnoughSegments { .. } => CliError::Training(e),
        ClassifierError::InvalidFoldCount(_) => CliError::Usage(e.to_string()),
        ClassifierError::Gabor(_) | ClassifierError::Histogram(_) => CliError::Usage(format!("invalid configuration: {e}")),
        other => CliError::Internal(other.to_string()),
    }
}
