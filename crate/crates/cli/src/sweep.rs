//! Concurrent classify + verify over the parameter grid.

use rayon::prelude::*;

use crate::classify::classify_point;
use crate::config::RunConfig;
use crate::output::{write_csv_records, write_json};
use crate::verify::{verify_point, SuiteFilter, VerifyReport};
use crate::RunSummary;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn row(cfg: &RunConfig, rep: &VerifyReport) -> Vec<String> {
    let pt = &rep.point;
    let mut out = vec![
        pt.index.to_string(),
        pt.dim.to_string(),
        pt.alpha.to_string(),
        pt.beta.to_string(),
        pt.b.to_string(),
        pt.c.to_string(),
        opt(rep.lambda_min),
        opt(rep.lambda),
    ];
    for &p in &cfg.p_list {
        let c = classify_point(pt, p);
        out.push(c.k1.map(|k| k.to_string()).unwrap_or_default());
        out.push(c.regime.map(|r| format!("{r:?}")).unwrap_or_default());
    }
    let worst = rep
        .suites
        .iter()
        .filter_map(|s| s.worst_relative_margin)
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.min(m))));
    out.extend([
        rep.passed.to_string(),
        rep.failed.to_string(),
        opt(worst),
        rep.error.clone().unwrap_or_default(),
    ]);
    out
}

/// Writes `sweep.csv` (one row per grid point, ordered by grid index) and `sweep.json`.
///
/// `workers` sets the thread count; `None` uses rayon's default. Results are collected
/// in grid order, so the files do not depend on the worker count.
pub fn run(cfg: &RunConfig, filter: &SuiteFilter, workers: Option<usize>) -> anyhow::Result<RunSummary> {
    let points = cfg.params.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()?;
    let reports: Vec<VerifyReport> = pool.install(|| points.par_iter().map(|p| verify_point(cfg, p, filter)).collect());

    let mut header: Vec<String> = ["index", "dim", "alpha", "beta", "b", "c", "lambda_min", "lambda"]
        .map(String::from)
        .to_vec();
    for p in &cfg.p_list {
        header.push(format!("k1_p{p}"));
        header.push(format!("regime_p{p}"));
    }
    header.extend(["passed", "failed", "worst_relative_margin", "error"].map(String::from));
    let records: Vec<Vec<String>> = reports.iter().map(|r| row(cfg, r)).collect();
    write_csv_records(&cfg.out_dir.join("sweep.csv"), &header, &records)?;
    write_json(&cfg.out_dir.join("sweep.json"), &reports)?;
    Ok(RunSummary {
        passed: reports.iter().map(|r| r.passed).sum(),
        failed: reports.iter().map(|r| r.failed).sum(),
    })
}
