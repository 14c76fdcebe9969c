//! Inequality suites for each parameter point.

use semilab_core::conditions::k1;
use semilab_core::form::{core_convergence_experiment, evaluate_lower_estimates, form_value, re_form_quadratic, FormSpec};
use semilab_core::grid::test_function_corpus;
use semilab_core::inequalities::{a1_search, apriori_ratios, hardy_weighted, interp_weight_search, okazawa_estimate_check, A1Outcome};
use semilab_core::semigroup::adjoint_consistency;
use semilab_core::{InequalityReport, LpContext, OperatorParams, RadialFunction, RadialMesh, TestFunction};
use serde::Serialize;

use crate::config::{GridPoint, RunConfig};
use crate::output::write_json;
use crate::{setup, RunSummary};

pub const SUITES: [&str; 7] = ["hardy", "okazawa", "form", "interpolation", "apriori", "adjoint", "core"];

/// Failing reports kept verbatim per suite.
const KEPT_FAILURES: usize = 10;

/// Set of suites selected by `--filter` (comma separated); all suites when absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteFilter(Vec<&'static str>);

impl SuiteFilter {
    pub fn parse(spec: Option<&str>) -> anyhow::Result<Self> {
        let Some(spec) = spec else {
            return Ok(Self(SUITES.to_vec()));
        };
        let mut chosen = Vec::new();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let Some(&known) = SUITES.iter().find(|&&s| s == name) else {
                anyhow::bail!("unknown suite {name:?}; expected one of {}", SUITES.join(", "));
            };
            chosen.push(known);
        }
        anyhow::ensure!(!chosen.is_empty(), "empty suite filter");
        // Keep canonical order regardless of how the filter was written.
        Ok(Self(SUITES.iter().copied().filter(|s| chosen.contains(s)).collect()))
    }

    pub fn includes(&self, suite: &str) -> bool {
        self.0.contains(&suite)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest `margin / max(|lhs|, |rhs|)` over all checks.
    pub worst_relative_margin: Option<f64>,
    /// Cases whose preconditions do not hold, with the reason.
    pub skipped: Vec<String>,
    /// Up to ten failing reports.
    pub failures: Vec<InequalityReport>,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    passed: usize,
    worst: Option<f64>,
    skipped: Vec<String>,
    failures: Vec<InequalityReport>,
    failed: usize,
}

impl Tally {
    fn add(&mut self, r: InequalityReport) {
        self.checks += 1;
        let m = r.relative_margin();
        // A NaN margin replaces the current worst so that it stays visible.
        self.worst = Some(match self.worst {
            Some(w) if m >= w => w,
            _ => m,
        });
        if r.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(r);
            }
        }
    }

    fn skip(&mut self, why: impl Into<String>) {
        self.skipped.push(why.into());
    }

    fn finish(self, name: &str) -> SuiteSummary {
        SuiteSummary {
            name: name.into(),
            checks: self.checks,
            passed: self.passed,
            failed: self.failed,
            worst_relative_margin: self.worst,
            skipped: self.skipped,
            failures: self.failures,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub point: GridPoint,
    pub lambda_min: Option<f64>,
    pub lambda: Option<f64>,
    pub suites: Vec<SuiteSummary>,
    pub passed: usize,
    pub failed: usize,
    pub error: Option<String>,
}

struct Context<'a> {
    cfg: &'a RunConfig,
    params: OperatorParams,
    mesh: &'a RadialMesh,
    corpus: &'a [TestFunction],
    lambda_min: f64,
    lambda: f64,
}

fn hardy(cx: &Context, t: &mut Tally) {
    for u in cx.corpus {
        for delta in [0.0, cx.params.alpha()] {
            for &p in &cx.cfg.p_list {
                t.add(hardy_weighted(u, delta, p, cx.mesh));
            }
        }
    }
}

fn okazawa(cx: &Context, t: &mut Tally) -> semilab_core::Result<()> {
    for &p in &cx.cfg.p_list {
        let ctx = LpContext::new(&cx.params, p)?;
        if !ctx.subcritical_or_critical() {
            t.skip(format!("p = {p} above the critical exponent {}", ctx.threshold_p));
            continue;
        }
        let target = 0.5 * k1(&cx.params, &ctx);
        let (a1, posterior) = match a1_search(&cx.params, &ctx, target) {
            A1Outcome::Found { a1, posterior_min, .. } => (a1, posterior_min),
            A1Outcome::Infeasible { reason } => {
                t.skip(format!("p = {p}: no a1 for k_target = {target}: {reason}"));
                continue;
            }
        };
        t.add(InequalityReport::lower("q posterior minimum", posterior, target, 1e-9).with_context(format!("p = {p}")));
        for u in cx.corpus {
            for &eps in &cx.cfg.eps_list {
                t.add(okazawa_estimate_check(&cx.params, &ctx, u, eps, a1, target, cx.mesh, cx.cfg.tolerances.inequality)?);
            }
        }
    }
    Ok(())
}

fn form(cx: &Context, t: &mut Tally) {
    let mut shift = InequalityReport::lower("shift above lambda_min", cx.lambda, cx.lambda_min, 0.0);
    shift.pass = cx.lambda > cx.lambda_min;
    t.add(shift);
    let spec = FormSpec::new_unchecked(cx.params, cx.lambda);
    let tol = cx.cfg.tolerances.inequality;
    for u in cx.corpus {
        for r in evaluate_lower_estimates(&spec, u, cx.mesh) {
            t.add(r);
        }
        let a = form_value(&spec, u, u, cx.mesh);
        let b = re_form_quadratic(&spec, u, cx.mesh);
        let mismatch = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        t.add(InequalityReport::upper("integration by parts", mismatch, tol, 0.0));
    }
}

fn interpolation(cx: &Context, t: &mut Tally) {
    let mut eps = cx.cfg.eps_list.clone();
    eps.sort_by(f64::total_cmp);
    for &p in &cx.cfg.p_list {
        let consts: Vec<f64> = eps
            .iter()
            .map(|&e| interp_weight_search(cx.params.alpha(), p, e, cx.corpus, cx.mesh))
            .collect();
        for (w, e) in consts.windows(2).zip(eps.windows(2)) {
            t.add(
                InequalityReport::upper("interpolation constant non-increasing", w[1], w[0], 1e-12 * w[0].abs())
                    .with_context(format!("p = {p}, eps {} -> {}", e[0], e[1])),
            );
        }
    }
}

fn apriori(cx: &Context, t: &mut Tally) -> semilab_core::Result<()> {
    for &p in &cx.cfg.p_list {
        let ctx = LpContext::new(&cx.params, p)?;
        for u in cx.corpus {
            match apriori_ratios(&cx.params, &ctx, u, cx.mesh) {
                Ok(r) => t.add(
                    InequalityReport::upper("a-priori ratio finite", r.max(), f64::MAX, 0.0)
                        .with_context(format!("p = {p}")),
                ),
                Err(e) => {
                    t.skip(format!("p = {p}: {e}"));
                    break;
                }
            }
        }
    }
    Ok(())
}

fn adjoint(cx: &Context, t: &mut Tally) -> anyhow::Result<()> {
    let pairs: Vec<_> = cx
        .corpus
        .chunks_exact(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect();
    if pairs.is_empty() {
        t.skip("corpus too small for pairs");
        return Ok(());
    }
    let mesh = setup::mesh(cx.cfg, cx.params.dim())?;
    let study = adjoint_consistency(&cx.params, mesh, cx.lambda, &pairs, cx.cfg.tolerances.adjoint_ratio)?;
    t.add(study.report);
    Ok(())
}

/// `‖φ_n u - u‖_a` vanishes once the cutoff plateau `[2/n, n]` covers the support of `u`.
///
/// The defect is not monotone in `n` for every function, so earlier indices are only recorded.
fn core(cx: &Context, t: &mut Tally) -> semilab_core::Result<()> {
    let spec = FormSpec::new_unchecked(cx.params, cx.lambda);
    let ns = &cx.cfg.cutoff_indices;
    for u in cx.corpus {
        let (lo, hi) = u.support();
        let covers = |n: u32| 2.0 / n as f64 <= lo && n as f64 >= hi;
        if !ns.iter().any(|&n| covers(n)) {
            t.skip(format!("no cutoff index covers the support [{lo}, {hi}]"));
            continue;
        }
        let seq = core_convergence_experiment(&spec, u, ns, cx.mesh)?;
        for (&n, &d) in ns.iter().zip(&seq).filter(|(&n, _)| covers(n)) {
            t.add(
                InequalityReport::upper("cutoff defect vanishes", d, 0.0, 0.0)
                    .with_context(format!("n = {n}; defects over all indices {seq:?}")),
            );
        }
    }
    Ok(())
}

pub fn verify_point(cfg: &RunConfig, point: &GridPoint, filter: &SuiteFilter) -> VerifyReport {
    let mut report = VerifyReport {
        point: *point,
        lambda_min: None,
        lambda: None,
        suites: Vec::new(),
        passed: 0,
        failed: 0,
        error: None,
    };
    if let Err(e) = fill(cfg, point, filter, &mut report) {
        report.error = Some(e.to_string());
    }
    report.passed = report.suites.iter().map(|s| s.passed).sum();
    report.failed = report.suites.iter().map(|s| s.failed).sum::<usize>() + usize::from(report.error.is_some());
    report
}

fn fill(cfg: &RunConfig, point: &GridPoint, filter: &SuiteFilter, report: &mut VerifyReport) -> anyhow::Result<()> {
    let params = setup::params(point)?;
    let (lambda_min, lambda) = setup::shift(cfg, &params)?;
    report.lambda_min = Some(lambda_min);
    report.lambda = Some(lambda);
    let mesh = setup::mesh(cfg, params.dim())?;
    let corpus = test_function_corpus(&mesh, cfg.corpus_size, cfg.seed);
    let cx = Context {
        cfg,
        params,
        mesh: &mesh,
        corpus: &corpus,
        lambda_min,
        lambda,
    };
    for name in SUITES.iter().filter(|s| filter.includes(s)) {
        let mut t = Tally::default();
        match *name {
            "hardy" => hardy(&cx, &mut t),
            "okazawa" => okazawa(&cx, &mut t)?,
            "form" => form(&cx, &mut t),
            "interpolation" => interpolation(&cx, &mut t),
            "apriori" => apriori(&cx, &mut t)?,
            "adjoint" => adjoint(&cx, &mut t)?,
            "core" => core(&cx, &mut t)?,
            _ => unreachable!("suite names are validated by the filter"),
        }
        report.suites.push(t.finish(name));
    }
    Ok(())
}

/// Writes `verify.json` with one report per grid point.
pub fn run(cfg: &RunConfig, filter: &SuiteFilter) -> anyhow::Result<RunSummary> {
    let reports: Vec<VerifyReport> = cfg.params.points().iter().map(|p| verify_point(cfg, p, filter)).collect();
    write_json(&cfg.out_dir.join("verify.json"), &reports)?;
    Ok(RunSummary {
        passed: reports.iter().map(|r| r.passed).sum(),
        failed: reports.iter().map(|r| r.failed).sum(),
    })
}
