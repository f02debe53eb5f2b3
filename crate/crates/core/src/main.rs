use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mhdwave::io::{execute, load_config, Command, RunConfig};
use mhdwave::{Error, Result};

/// Damped wave-type MHD simulator and decay harness.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// TOML run configuration. Optional for verify-kernels and verify-lemmas.
    #[arg(long, global = true, env = "MHDW_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true, env = "MHDW_OUTPUT")]
    output: Option<PathBuf>,
    /// Overrides `initial_data.seed`.
    #[arg(long, global = true, env = "MHDW_SEED")]
    seed: Option<u64>,
    /// Worker threads; results are deterministic for a fixed count.
    #[arg(long, global = true, env = "MHDW_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the configured run and write the diagnostics series.
    Simulate {
        /// Continue from a checkpoint instead of the initial data.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Decay fits for every γ in `sweep.gammas`.
    Sweep,
    /// Fit decay exponents to an existing series CSV.
    FitDecay {
        #[arg(long)]
        series: PathBuf,
    },
    /// Kernel ODE, semigroup, determinant, heat-limit and bound checks.
    VerifyKernels,
    /// Quadrature checks of the time-convolution inequalities.
    VerifyLemmas,
    /// Distance to the γ = 0 baseline for every γ in `compare.gammas`.
    CompareMhd,
}

fn run(cli: Cli) -> Result<()> {
    let command = match cli.command {
        Cmd::Simulate { resume } => Command::Simulate { resume },
        Cmd::Sweep => Command::Sweep,
        Cmd::FitDecay { series } => Command::FitDecay { series },
        Cmd::VerifyKernels => Command::VerifyKernels,
        Cmd::VerifyLemmas => Command::VerifyLemmas,
        Cmd::CompareMhd => Command::CompareMhd,
    };
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None if matches!(command, Command::VerifyKernels | Command::VerifyLemmas) => RunConfig::default(),
        None => return Err(Error::Usage(format!("{} needs --config", command.name()))),
    };
    if let Some(seed) = cli.seed {
        config.initial_data.seed = seed;
    }
    if let Some(dir) = cli.output {
        config.output.directory = dir.to_string_lossy().into_owned();
    }
    config.validate()?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    execute(&command, &config)?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.category(), "message": e.to_string() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
