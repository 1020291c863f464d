//! `entconc`: ensembles of dephased Haar-random states, concentration
//! bounds and property checks from the command line.

mod bound;
mod config;
mod report;
mod run;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::NoiseArg;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ENTCONC_OUTPUT_DIR";
const FALLBACK_OUTPUT_DIR: &str = "entconc-out";

#[derive(Debug, Parser)]
#[command(
    name = "entconc",
    version,
    about = "Entanglement concentration under local dephasing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample one ensemble and write per-p records, a summary and histograms.
    Sample(SampleArgs),
    /// Ensembles over a range of register sizes; fits ln(std) against N.
    Sweep(SweepArgs),
    /// Evaluate the negativity concentration bound.
    Bound(BoundArgs),
    /// Run randomized property suites.
    Verify(VerifyArgs),
    /// Regenerate the histogram panels and the scaling panel.
    #[command(name = "reproduce-fig2")]
    ReproduceFig2(Fig2Args),
    /// Re-run the experiment recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Number of qubits.
    #[arg(long)]
    qubits: Option<usize>,
    /// Dephasing probabilities, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["gamma", "t"])]
    p: Option<Vec<f64>>,
    /// Decoherence rate; combine with --t.
    #[arg(long, requires = "t")]
    gamma: Option<f64>,
    /// Times, comma separated; p = 1 - exp(-gamma t).
    #[arg(long, value_delimiter = ',', requires = "gamma")]
    t: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Qubit indices of side A (e.g. "0,2") or "1-vs-rest".
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    qubits_from: Option<usize>,
    #[arg(long)]
    qubits_to: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    /// Replace the ensembles by synthetic data with a known fit.
    #[arg(long, value_enum)]
    synthetic: Option<run::Synthetic>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Output directory [default: $ENTCONC_OUTPUT_DIR or ./entconc-out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with default values; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Dimension of the smaller subsystem.
    #[arg(long = "dA")]
    d_a: usize,
    /// Dimension of the larger subsystem.
    #[arg(long = "dB")]
    d_b: usize,
    #[arg(long)]
    epsilon: f64,
    /// Contraction coefficient of the channel.
    #[arg(long, default_value_t = 1.0)]
    eta_channel: f64,
    #[arg(long, value_enum, default_value_t = bound::Format::Text)]
    format: bound::Format,
    /// Also evaluate the generic Levy form and require agreement.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = verify::Suite::All)]
    suite: verify::Suite,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Hilbert-space dimension for the Haar suite.
    #[arg(long, default_value_t = 8)]
    dim: usize,
    /// Register size for the channel suites.
    #[arg(long, default_value_t = 3)]
    qubits: usize,
}

#[derive(Debug, Args)]
struct Fig2Args {
    /// 1000 samples and at most 6 qubits.
    #[arg(long)]
    fast: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Output directory [default: the manifest's directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flag or configuration error; exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// A checked property did not hold; exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct PropertyFailure(pub String);

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    if err.downcast_ref::<PropertyFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<entconc::Error>() {
        Some(
            entconc::Error::OutOfRange { .. }
            | entconc::Error::InvalidSplit(_)
            | entconc::Error::DimensionMismatch { .. },
        ) => 2,
        _ => 1,
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sample(a) => {
            let file = config::FileConfig::load(a.io.config.as_deref())?;
            let (plan, out) = config::resolve_sample(&a, &file)?;
            run::execute(&plan, &out)
        }
        Command::Sweep(a) => {
            let file = config::FileConfig::load(a.io.config.as_deref())?;
            let (plan, out) = config::resolve_sweep(&a, &file)?;
            run::execute(&plan, &out)
        }
        Command::Bound(a) => bound::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::ReproduceFig2(a) => {
            let plan = run::fig2_plan(a.fast, a.samples, a.seed, a.bins)?;
            run::execute(&plan, &a.out.unwrap_or_else(default_out_dir))
        }
        Command::Replay(a) => run::replay(&a.manifest, a.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
