//! `milac`: coupling matrices, single-channel designs, Monte Carlo sweeps and
//! invariant checks from a TOML run file.

mod commands;
mod config;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::FlagOverrides;

#[derive(Parser)]
#[command(name = "milac", version, about = "MiLAC beamforming under antenna mutual coupling")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run file, or a manifest.json from an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for every random draw (overrides `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override a config value, e.g. `--set array.spacing=0.25`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Gauss-Legendre order of the coupling integrals (overrides `array.quad_order`).
    #[arg(long, global = true)]
    quad_order: Option<usize>,

    /// Monte Carlo trials per point (overrides `experiment.n_trials`).
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Write the transmit array's impedance matrix and its trace ratio.
    Coupling,
    /// Design the MiLAC for one seeded channel and report its power.
    Optimize,
    /// Run a Monte Carlo sweep.
    Experiment,
    /// Check the model invariants on a coupling fixture.
    Verify,
}

fn run(cli: &Cli) -> Result<bool> {
    let flags = FlagOverrides { seed: cli.seed, quad_order: cli.quad_order, trials: cli.trials };
    let run = config::load(cli.config.as_deref(), &cli.set, &flags)?;
    match cli.command {
        Command::Coupling => commands::cmd_coupling(&run, &cli.out).map(|()| true),
        Command::Optimize => commands::cmd_optimize(&run, &cli.out).map(|()| true),
        Command::Experiment => commands::cmd_experiment(&run, &cli.out).map(|()| true),
        Command::Verify => verify::cmd_verify(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
