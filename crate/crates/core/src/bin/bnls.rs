use std::path::PathBuf;
use std::process::ExitCode;

use bnls::harness::{execute, exit_code, Invocation, Scenario};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bnls", version, about = "Biharmonic NLS experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (BNLS_OUT takes precedence).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on grid points per side.
    #[arg(long, global = true)]
    max_grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    Evolve,
    AlmostConservationSweep,
    ScalingCheck,
    Strichartz,
    Bernstein,
    SquareFunction,
    MultiplierBound,
    PlanGlobalization,
    XsbProbe,
    /// Run whatever scenario the config file names.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match cli.command {
        Command::Evolve => Some(Scenario::Evolve),
        Command::AlmostConservationSweep => Some(Scenario::AlmostConservationSweep),
        Command::ScalingCheck => Some(Scenario::ScalingCheck),
        Command::Strichartz => Some(Scenario::Strichartz),
        Command::Bernstein => Some(Scenario::Bernstein),
        Command::SquareFunction => Some(Scenario::SquareFunction),
        Command::MultiplierBound => Some(Scenario::MultiplierBound),
        Command::PlanGlobalization => Some(Scenario::PlanGlobalization),
        Command::XsbProbe => Some(Scenario::XsbProbe),
        Command::Run => None,
    };
    let inv = Invocation {
        scenario,
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
        threads: cli.threads,
        max_grid: cli.max_grid,
    };
    let out = inv.load().map(|cfg| inv.out_dir(&cfg));
    match execute(&inv) {
        Ok(manifest) => {
            for a in &manifest.assertions {
                println!("PASS {}: {}", a.name, a.detail);
            }
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            if let Ok(dir) = out {
                println!("wrote {}", dir.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bnls: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
