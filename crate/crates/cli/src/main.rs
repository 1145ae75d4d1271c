//! `ovlstat`: effect sizes, simulation tables and plate hit selection from the command line.

mod compute;
mod output;
mod screen;
mod simulate;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use output::{CliResult, Context, Failure};

#[derive(Debug, Parser)]
#[command(
    name = "ovlstat",
    version,
    about = "Overlap-based effect sizes (GSSMD) and assay quality measures"
)]
struct Cli {
    /// Include wall-clock time in JSON envelopes (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All five effect-size measures for two value lists.
    Compute(compute::ComputeArgs),
    /// Reproduce a Monte Carlo study as a table.
    #[command(subcommand)]
    Simulate(simulate::SimulateCommand),
    /// Per-plate thresholds and hit calls from a plate CSV.
    Screen(screen::ScreenArgs),
    /// Write synthetic plates (with planted hits) as plate CSV.
    SynthPlates(screen::SynthArgs),
}

fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var("OVLSTAT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n >= 1).ok_or_else(|| {
        Failure::input(format!(
            "OVLSTAT_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(format!("cannot configure worker pool: {e}")))
}

fn run(cli: &Cli, ctx: &Context) -> CliResult {
    configure_threads()?;
    match &cli.command {
        Command::Compute(a) => compute::run(a, ctx),
        Command::Simulate(c) => simulate::run(c, ctx),
        Command::Screen(a) => screen::run(a, ctx),
        Command::SynthPlates(a) => screen::run_synth(a),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let ctx = Context {
        argv: &argv[1..],
        started: cli.timing.then_some(started),
    };
    match run(&cli, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
