//! Batch driver: classification tables, simulations, verification suites and sweeps.
//!
//! Every output is a pure function of the configuration and the seed. Reports are
//! written as pretty-printed JSON, tabular data as CSV.

pub mod classify;
pub mod config;
pub mod output;
pub mod setup;
pub mod simulate;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

pub use config::{Command, RunConfig};

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub filter: Option<String>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

/// Summary returned to the binary; the exit code is 0 iff `failed == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub passed: usize,
    pub failed: usize,
}

pub fn run(command: Command, mut cfg: RunConfig, overrides: Overrides) -> anyhow::Result<RunSummary> {
    cfg.command = command;
    if let Some(out) = overrides.out {
        cfg.out_dir = out;
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let filter = verify::SuiteFilter::parse(overrides.filter.as_deref())?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    output::write_json(&cfg.out_dir.join("config.json"), &cfg)?;
    match command {
        Command::Classify => classify::run(&cfg),
        Command::Simulate => simulate::run(&cfg),
        Command::Verify => verify::run(&cfg, &filter),
        Command::Sweep => sweep::run(&cfg, &filter, overrides.workers),
    }
}
