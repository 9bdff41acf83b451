//! `modsep` command-line front end: corpus synthesis, histogram export,
//! reference building, classification and cross-validation.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::InputSet;
use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "modsep", version, about = "Voice/music segmentation from modulation features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; every field is optional.
    #[arg(long, env = "MODSEP_CONFIG")]
    config: Option<PathBuf>,
    /// Segment length in seconds, overriding the configuration.
    #[arg(long)]
    segment_len: Option<f64>,
}

#[derive(Args)]
struct Inputs {
    /// Audio file (16-bit mono WAV); repeat and pair with --labels.
    #[arg(long)]
    audio: Vec<PathBuf>,
    /// Label file (`start,end,V|M` lines), one per --audio.
    #[arg(long)]
    labels: Vec<PathBuf>,
    /// Directory of `name.wav` files with matching `name.csv` labels.
    #[arg(long)]
    dir: Option<PathBuf>,
}

impl Inputs {
    fn resolve(&self) -> Result<InputSet, CliError> {
        InputSet::resolve(&self.audio, &self.labels, self.dir.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write per-segment, per-band frequency histograms and a manifest.
    Extract {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        inputs: Inputs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Also write the per-sample demodulation tracks.
        #[arg(long)]
        tracks: bool,
    },
    /// Build a reference model from every labeled segment.
    BuildRef {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        inputs: Inputs,
        /// Model JSON to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify labeled segments, or a fixed grid when no labels are given.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, required = true)]
        audio: Vec<PathBuf>,
        #[arg(long)]
        labels: Vec<PathBuf>,
        #[arg(long)]
        model: PathBuf,
        /// Results file; `.csv` selects CSV, anything else JSON. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified k-fold evaluation.
    CrossValidate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON report to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic corpus, one WAV and label file per segment.
    SynthCorpus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_voice: usize,
        #[arg(long)]
        n_music: usize,
        #[arg(long, default_value_t = 22050.0)]
        sample_rate: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(len) = common.segment_len {
        cfg.segment_len_s = len;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract {
            common,
            inputs,
            out,
            tracks,
        } => {
            let cfg = load_config(&common)?;
            let n = commands::extract(&inputs.resolve()?, &out, tracks, &cfg)?;
            eprintln!("wrote {n} segments to {}", out.display());
        }
        Command::BuildRef { common, inputs, out } => {
            let cfg = load_config(&common)?;
            let model = commands::build_ref(&inputs.resolve()?, &out, &cfg)?;
            let p = model.provenance();
            eprintln!("reference from {} voice and {} music segments", p.voice, p.music);
        }
        Command::Classify {
            common,
            audio,
            labels,
            model,
            out,
        } => {
            let cfg = load_config(&common)?;
            commands::classify(&audio, &labels, &model, out.as_deref(), &cfg)?;
        }
        Command::CrossValidate {
            common,
            inputs,
            k,
            seed,
            out,
        } => {
            let mut cfg = load_config(&common)?;
            cfg.k_folds = k.unwrap_or(cfg.k_folds);
            cfg.seed = seed.unwrap_or(cfg.seed);
            commands::cross_val(&inputs.resolve()?, out.as_deref(), &cfg)?;
        }
        Command::SynthCorpus {
            common,
            n_voice,
            n_music,
            sample_rate,
            seed,
            out,
        } => {
            let mut cfg = load_config(&common)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            let n = commands::synth_corpus(n_voice, n_music, sample_rate, &out, &cfg)?;
            eprintln!("wrote {n} segments to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
