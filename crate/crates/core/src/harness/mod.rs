//! Experiment harness: TOML configuration, seeded data, scenario runs and
//! their CSV / SVG / manifest output.

pub mod config;
pub mod data;
pub mod run;
pub mod svg;

use std::path::PathBuf;

pub use config::{DataRecipe, ExperimentConfig, Scenario};
pub use data::{generate_data, DataContext};
pub use run::{run_scenario, AssertionOutcome, RunManifest, MANIFEST_NAME};
pub use svg::{Axis, LinePlot, Series};

use crate::{Error, Result};

/// Environment variable overriding every other output location.
pub const OUT_ENV: &str = "BNLS_OUT";

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::UnknownScenario(_) | Error::Parameter(_) | Error::Data(_) => 2,
        Error::Resource(_) => 3,
        Error::Assertion(_) => 5,
        Error::Io(_) => 1,
        _ => 4,
    }
}

/// One command-line invocation, already parsed.
#[derive(Clone, Debug, Default)]
pub struct Invocation {
    /// Overrides the scenario named in the config file.
    pub scenario: Option<Scenario>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub max_grid: Option<usize>,
}

impl Invocation {
    pub fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, self.scenario) {
            (Some(path), scenario) => {
                let cfg = ExperimentConfig::from_path(path)?;
                match scenario {
                    Some(s) if s != cfg.scenario => {
                        return Err(Error::Config(format!(
                            "{} names scenario {}, not {s}",
                            path.display(),
                            cfg.scenario
                        )))
                    }
                    _ => cfg,
                }
            }
            (None, Some(s)) => ExperimentConfig::defaults(s),
            (None, None) => return Err(Error::Config("no scenario and no config file given".into())),
        };
        if let Some(seed) = self.seed {
            cfg = cfg.with_seed(seed);
        }
        if let Some(n) = self.max_grid {
            cfg = cfg.with_max_grid(n)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// `BNLS_OUT`, then `--out`, then `run.out` from the config, then
    /// `runs/<scenario>`.
    pub fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        if let Some(dir) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
            return dir.into();
        }
        self.out
            .clone()
            .or_else(|| cfg.out.clone())
            .unwrap_or_else(|| PathBuf::from("runs").join(cfg.scenario.name()))
    }
}

/// Loads, runs and writes one scenario. Failed assertions come back as
/// [`Error::Assertion`] after the outputs are on disk.
pub fn execute(inv: &Invocation) -> Result<RunManifest> {
    let cfg = inv.load()?;
    if let Some(threads) = inv.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let out = inv.out_dir(&cfg);
    let manifest = run_scenario(&cfg, &out)?;
    if !manifest.passed() {
        let names: Vec<_> = manifest.failures().iter().map(|a| format!("{}: {}", a.name, a.detail)).collect();
        return Err(Error::Assertion(names.join("; ")));
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Resource("x".into())), 3);
        assert_eq!(exit_code(&Error::BlowUp { last_good_time: 0.0 }), 4);
        assert_eq!(exit_code(&Error::Assertion("x".into())), 5);
    }

    #[test]
    fn scenario_mismatch_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "[run]\nscenario = \"plan-globalization\"\n").unwrap();
        let inv = Invocation { scenario: Some(Scenario::Bernstein), config: Some(path), ..Default::default() };
        assert!(matches!(inv.load(), Err(Error::Config(_))));
    }
}
