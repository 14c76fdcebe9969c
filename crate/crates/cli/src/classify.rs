//! Classification table over the parameter grid and `p_list`.

use semilab_core::conditions::{
    classify_generation, classify_schrodinger, k_constants, maximality_condition, SchrodingerRegime,
};
use semilab_core::{LpContext, Regime};
use serde::Serialize;

use crate::config::{GridPoint, RunConfig};
use crate::output::{write_csv_rows, write_json};
use crate::{setup, RunSummary};

/// One `(point, p)` row. Fields after `p` are empty when `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyRow {
    pub index: usize,
    pub dim: u32,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
    pub p_prime: Option<f64>,
    pub threshold_p: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
    pub k4: Option<f64>,
    pub regime: Option<Regime>,
    /// Only for `b = 0`.
    pub schrodinger: Option<SchrodingerRegime>,
    pub maximality: Option<bool>,
    pub lambda_min: Option<f64>,
    pub notes: String,
    pub error: Option<String>,
}

impl ClassifyRow {
    fn empty(point: &GridPoint, p: f64) -> Self {
        Self {
            index: point.index,
            dim: point.dim,
            alpha: point.alpha,
            beta: point.beta,
            b: point.b,
            c: point.c,
            p,
            p_prime: None,
            threshold_p: None,
            k1: None,
            k2: None,
            k3: None,
            k4: None,
            regime: None,
            schrodinger: None,
            maximality: None,
            lambda_min: None,
            notes: String::new(),
            error: None,
        }
    }
}

pub fn classify_point(point: &GridPoint, p: f64) -> ClassifyRow {
    let mut row = ClassifyRow::empty(point, p);
    let params = match setup::params(point) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let ctx = match LpContext::new(&params, p) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let k = k_constants(&params, &ctx);
    let verdict = classify_generation(&params, &ctx);
    row.p_prime = Some(ctx.p_prime);
    row.threshold_p = Some(ctx.threshold_p);
    (row.k1, row.k2, row.k3, row.k4) = (Some(k.k1), Some(k.k2), Some(k.k3), Some(k.k4));
    row.regime = Some(verdict.regime);
    row.maximality = Some(maximality_condition(&params, &ctx));
    let mut notes = vec![verdict.notes];
    if params.b() == 0.0 {
        match classify_schrodinger(&params, &ctx) {
            Ok(s) => {
                row.schrodinger = Some(s.regime);
                notes.push(s.notes);
            }
            Err(e) => notes.push(e.to_string()),
        }
    }
    match semilab_core::conditions::lambda_min(&params) {
        Ok(l) => row.lambda_min = Some(l),
        Err(e) => notes.push(e.to_string()),
    }
    row.notes = notes.join("; ");
    row
}

pub fn table(cfg: &RunConfig) -> Vec<ClassifyRow> {
    cfg.params
        .points()
        .iter()
        .flat_map(|pt| cfg.p_list.iter().map(move |&p| classify_point(pt, p)))
        .collect()
}

/// Writes `classify.csv` and `classify.json`. Invalid points become error rows and do
/// not count as failures.
pub fn run(cfg: &RunConfig) -> anyhow::Result<RunSummary> {
    let rows = table(cfg);
    write_csv_rows(&cfg.out_dir.join("classify.csv"), &rows)?;
    write_json(&cfg.out_dir.join("classify.json"), &rows)?;
    Ok(RunSummary {
        passed: rows.iter().filter(|r| r.error.is_none()).count(),
        failed: 0,
    })
}
