use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use semilab_cli::{run, Command, Overrides, RunConfig};

/// Classification, simulation, verification and sweeps for the radial operator
/// (1 + r^α) Δ + b r^{α-1} ∂_r - c r^{α-2} - r^β.
#[derive(Debug, Parser)]
#[command(name = "semilab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// JSON config file; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated verification suites: hardy, okazawa, form, interpolation, apriori, adjoint, core.
    #[arg(long)]
    filter: Option<String>,

    /// Corpus seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,

    /// Sweep worker threads.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = (|| -> anyhow::Result<_> {
        let cfg = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let overrides = Overrides {
            out: args.out.clone(),
            filter: args.filter.clone(),
            seed: args.seed,
            workers: args.workers,
        };
        run(args.command, cfg, overrides)
    })();
    match result {
        Ok(s) => {
            println!("{:?}: {} passed, {} failed", args.command, s.passed, s.failed);
            if s.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
