//! `evohull`: runs hull-recovery, optimization, operator-law and entropy
//! experiments from JSON configs.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails,
//! 2 on a configuration or instance error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use env_logger::Env;
use log::error;

use config::{CommandKind, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(name = "evohull", version, about = "Evolutionary hull recovery and optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scramble the hull mesh, then recover it by greedy descent and by the EA.
    HullRecover(RunArgs),
    /// Solve an LP or QP instance and compare with its oracle.
    Optimize(RunArgs),
    /// Check the selection, mutation and recombination laws.
    OperatorLaws(RunArgs),
    /// Per-generation entropies of a saved run record.
    EntropyReport(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Seeds to run; replaces the config's list. Repeatable.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Output directory; replaces the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(Env::new().filter_or("EVOHULL_LOG", "warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::HullRecover(a) => (CommandKind::HullRecover, a),
        Command::Optimize(a) => (CommandKind::Optimize, a),
        Command::OperatorLaws(a) => (CommandKind::OperatorLaws, a),
        Command::EntropyReport(a) => (CommandKind::EntropyReport, a),
    };
    let cfg = match ExperimentConfig::load(&args.config, kind, &args.seeds, args.out.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("evohull: {e:#}");
            return ExitCode::from(2);
        }
    };
    let outcome = match kind {
        CommandKind::HullRecover => commands::hull_recover(&cfg),
        CommandKind::Optimize => commands::optimize(&cfg),
        CommandKind::OperatorLaws => commands::operator_laws(&cfg),
        CommandKind::EntropyReport => commands::entropy_report(&cfg),
    };
    match outcome {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                error!("{f}");
                eprintln!("evohull: verification failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("evohull: {e:#}");
            ExitCode::from(2)
        }
    }
}
