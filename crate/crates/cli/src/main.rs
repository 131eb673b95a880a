use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

mod commands;

use commands::NoSolution;

/// Compressed waveform memory: corpus generation, codec and pipeline simulation.
#[derive(Debug, Parser)]
#[command(name = "cwm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded pulse library for a ring of qubits.
    GenCorpus(GenCorpusArgs),
    /// Compress a waveform library into a CWMF file.
    Compress(CompressArgs),
    /// Decode a CWMF file back into a waveform library.
    Decompress(DecompressArgs),
    /// Compare a library with its compressed form.
    Report(ReportArgs),
    /// Stream every compressed waveform through the memory pipeline.
    Simulate(SimulateArgs),
    /// Bank plans and streaming checks over a grid of configurations.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenCorpusArgs {
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub qubits: usize,
    #[arg(long, default_value_t = cwm::corpus::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 4.54e9)]
    pub sample_rate: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("budget").required(true).args(["target_error", "threshold"])))]
pub struct CompressArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "int-dct-w")]
    pub variant: cwm::transform::TransformKind,
    #[arg(long, default_value_t = 16)]
    pub window_size: usize,
    /// Largest acceptable MSE; searches for the threshold.
    #[arg(long)]
    pub target_error: Option<f64>,
    /// Fixed coefficient threshold in orthonormal units.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Quantizer width for the integer variant: 12, 14 or 16.
    #[arg(long, default_value_t = 16)]
    pub bit_width: u32,
}

#[derive(Debug, Args)]
pub struct DecompressArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// CWMF files do not record the sample rate.
    #[arg(long, default_value_t = 4.54e9)]
    pub sample_rate: f64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Original waveform library (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Compressed library (CWMF).
    #[arg(long)]
    pub compressed: PathBuf,
    /// Report JSON.
    #[arg(long)]
    pub output: PathBuf,
    /// Per-waveform CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Stats JSON.
    #[arg(long)]
    pub output: PathBuf,
    /// DAC rate over fabric clock.
    #[arg(long, default_value_t = 16.0)]
    pub ratio: f64,
    /// Banks per channel, overriding the plan.
    #[arg(long, conflicts_with = "adaptive")]
    pub banks: Option<u64>,
    /// Bypass memory and IDCT on plateaus.
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long, default_value_t = 1)]
    pub latency: u32,
    /// Simulate only this waveform.
    #[arg(long)]
    pub label: Option<String>,
    /// Per-cycle CSV; needs a single waveform.
    #[arg(long, requires = "label")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, num_args = 1.., default_values_t = [6.0, 16.0])]
    pub ratio: Vec<f64>,
    #[arg(long, num_args = 1.., default_values_t = [8, 16])]
    pub window_size: Vec<usize>,
    #[arg(long, num_args = 1.., default_values_t = [1, 2, 3, 4])]
    pub width: Vec<usize>,
    /// Windows streamed per configuration.
    #[arg(long, default_value_t = 256)]
    pub windows: usize,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

const EXIT_OTHER: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NO_SOLUTION: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<NoSolution>() {
            return EXIT_NO_SOLUTION;
        }
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<cwm::Error>() {
            return match e {
                cwm::Error::Io(_) => EXIT_IO,
                cwm::Error::Csv(c) if c.is_io_error() => EXIT_IO,
                _ => EXIT_VALIDATION,
            };
        }
        if cause.is::<serde_json::Error>() {
            return EXIT_VALIDATION;
        }
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenCorpus(a) => commands::gen_corpus(&a),
        Command::Compress(a) => commands::compress(&a),
        Command::Decompress(a) => commands::decompress(&a),
        Command::Report(a) => commands::report(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
