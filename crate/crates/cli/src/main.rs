//! `levy-chaos`: recurrence tables, noise simulation and chaos checks
//! driven by a TOML experiment file.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Check, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(name = "levy-chaos", version, about)]
struct Cli {
    /// Experiment file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `seed` from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides `samples` from the config.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Directory for CSV artifacts.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for Monte Carlo (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the recurrence table of one cell as CSV.
    Recurrence {
        #[arg(long, default_value_t = 0)]
        cell: usize,
        /// Table order; defaults to `degree_cut` from the config.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Write sampled noise paths as CSV.
    Simulate {
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one check and print its rows as CSV.
    Verify {
        #[arg(value_enum)]
        check: Check,
    },
    /// Run every check listed in the config and write one CSV per check.
    Report,
}

pub enum Failure {
    Usage(String),
    Checks,
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<levy_chaos::Error> for Failure {
    fn from(e: levy_chaos::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let path = cli.config.ok_or_else(|| Failure::Usage("--config is required".into()))?;
    let mut cfg = ExperimentConfig::load(&path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = cli.samples {
        if samples < 2 {
            return Err(Failure::Usage("--samples: must be at least 2".into()));
        }
        cfg.samples = samples;
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Failure::Usage("--threads: must be at least 1".into()));
        }
        cfg.threads = Some(threads);
    }
    let out_dir = cli.out_dir.or_else(|| cfg.out_dir.as_ref().map(PathBuf::from));
    match cli.command {
        Command::Recurrence { cell, order } => commands::recurrence(&cfg, cell, order),
        Command::Simulate { out } => commands::simulate(&cfg, &out),
        Command::Verify { check } => commands::verify(&cfg, check, out_dir.as_deref()),
        Command::Report => commands::report(&cfg, out_dir.as_deref().unwrap_or(".".as_ref())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
