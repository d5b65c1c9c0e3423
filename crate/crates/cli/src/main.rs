//! `mlbound`: SNR sweeps of ML decoding error bounds from a TOML config.

mod build;
mod config;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, SweepConfig};
use error::CliError;
use run::Overrides;

#[derive(Debug, Parser)]
#[command(name = "mlbound", version, about = "Upper bounds on ML decoding error probability")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output file (stdout when absent and the config names none).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Simulation seed; overrides `[simulate] seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a spectrum or IOWEF and write it in the cache format.
    Spectrum { config: PathBuf },
    /// Evaluate the configured bounds over the Eb/N0 sweep.
    Bounds { config: PathBuf },
    /// Monte Carlo ML decoding with the configured bounds alongside.
    Simulate { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(CliError::config)?;
    let ov = Overrides {
        out: cli.out,
        format: cli.format,
        seed: cli.seed,
    };
    pool.install(|| match &cli.cmd {
        Cmd::Spectrum { config } => run::cmd_spectrum(&SweepConfig::load(config)?, &ov),
        Cmd::Bounds { config } => run::cmd_bounds(&SweepConfig::load(config)?, &ov),
        Cmd::Simulate { config } => run::cmd_simulate(&SweepConfig::load(config)?, &ov),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
