//! Runs a harness scenario from a TOML file and prints its manifest.
//!
//!     cargo run --release --example run_scenario -- configs/plan.toml /tmp/plan

use std::path::PathBuf;

use bnls::harness::{run_scenario, ExperimentConfig};

fn main() -> bnls::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(args.next().unwrap_or_else(|| "configs/plan.toml".into()));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "runs/example".into()));
    let cfg = ExperimentConfig::from_path(&config)?;
    println!("digest {}", cfg.digest());
    let manifest = run_scenario(&cfg, &out)?;
    print!("{}", manifest.render());
    Ok(())
}
