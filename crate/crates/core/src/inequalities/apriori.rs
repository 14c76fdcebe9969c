use serde::Serialize;

use crate::conditions::{classify_generation, LpContext, OperatorParams, Regime};
use crate::error::{Error, Result};
use crate::grid::{RadialFunction, RadialMesh, SupportQuadrature, TestFunction};
use crate::report::InequalityReport;

/// `(∫ |f|^p)^{1/p}` over the support of `u`, with `f` built from `(r, u, u', u'')`.
fn support_norm(u: &TestFunction, mesh: &RadialMesh, p: f64, f: impl Fn(f64, f64, f64, f64) -> f64) -> f64 {
    let (lo, hi) = u.support();
    let q = SupportQuadrature::on_mesh(mesh, lo, hi, &u.breakpoints());
    q.integrate(|r| {
        let (a, b, c) = u.eval3(r);
        f(r, a, b, c).abs().powf(p)
    })
    .powf(1.0 / p)
}

/// Ratios of the four domain norms to `‖A_{b,c} u‖_p + ‖u‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AprioriRatios {
    /// `‖(1 + r^α) Δu‖_p`.
    pub diffusion: f64,
    /// `‖r^{α-1} u'‖_p`.
    pub drift: f64,
    /// `‖r^{α-2} u‖_p`.
    pub singular: f64,
    /// `‖r^β u‖_p`.
    pub growth: f64,
}

impl AprioriRatios {
    pub fn max(&self) -> f64 {
        self.diffusion.max(self.drift).max(self.singular).max(self.growth)
    }
}

/// Requires the closure regime of the generation classifier for `(params, p)`.
pub fn apriori_ratios(params: &OperatorParams, ctx: &LpContext, u: &TestFunction, mesh: &RadialMesh) -> Result<AprioriRatios> {
    let verdict = classify_generation(params, ctx);
    if verdict.regime != Regime::ClosureGeneratesD0Core {
        return Err(Error::Precondition(format!(
            "a-priori estimates need the closure regime: {}",
            verdict.notes
        )));
    }
    let p = ctx.p;
    let (a, beta) = (params.alpha(), params.beta());
    let nm1 = params.n() - 1.0;
    let au = support_norm(u, mesh, p, |r, v, d1, d2| params.apply_radial(r, v, d1, d2));
    let un = support_norm(u, mesh, p, |_, v, _, _| v);
    let den = au + un;
    let ratio = |f: &dyn Fn(f64, f64, f64, f64) -> f64| support_norm(u, mesh, p, f) / den;
    Ok(AprioriRatios {
        diffusion: ratio(&|r, _, d1, d2| (1.0 + r.powf(a)) * (d2 + nm1 * d1 / r)),
        drift: ratio(&|r, _, d1, _| r.powf(a - 1.0) * d1),
        singular: ratio(&|r, v, _, _| r.powf(a - 2.0) * v),
        growth: ratio(&|r, v, _, _| r.powf(beta) * v),
    })
}

/// Least `C` with `‖r^{α-1} u'‖_p <= eps ‖r^α u''‖_p + C ‖r^{α-2} u‖_p` over the corpus.
pub fn interp_weight_search(alpha: f64, p: f64, eps: f64, corpus: &[TestFunction], mesh: &RadialMesh) -> f64 {
    corpus
        .iter()
        .map(|u| {
            let first = support_norm(u, mesh, p, |r, _, d1, _| r.powf(alpha - 1.0) * d1);
            let second = support_norm(u, mesh, p, |r, _, _, d2| r.powf(alpha) * d2);
            let zeroth = support_norm(u, mesh, p, |r, v, _, _| r.powf(alpha - 2.0) * v);
            let excess = first - eps * second;
            if excess <= 0.0 || zeroth == 0.0 {
                0.0
            } else {
                excess / zeroth
            }
        })
        .fold(0.0, f64::max)
}

/// Outcome of the drift-boundedness check.
#[derive(Debug, Clone, Serialize)]
pub struct DriftPerturbation {
    /// Worst corpus case of `‖r^{α-1} u'‖_p <= ‖(1 + r^α)^{1/2} u'‖_p`.
    pub domination: InequalityReport,
    /// `(ε, C_ε)` with `C_ε` the least constant fitting
    /// `‖(1 + r^α)^{1/2} u'‖_p <= ε ‖(1 + r^α) Δu - r^β u‖_p + C_ε ‖u‖_p` on the corpus.
    pub fits: Vec<(f64, f64)>,
}

/// Requires `α ∈ [1, 2)`.
pub fn drift_perturbation_check(
    params: &OperatorParams,
    p: f64,
    corpus: &[TestFunction],
    mesh: &RadialMesh,
    eps_list: &[f64],
) -> Result<DriftPerturbation> {
    let a = params.alpha();
    if a < 1.0 {
        return Err(Error::Precondition(format!("drift domination needs alpha >= 1, got {a}")));
    }
    let (beta, nm1) = (params.beta(), params.n() - 1.0);
    let mut worst: Option<InequalityReport> = None;
    let mut rows = Vec::with_capacity(corpus.len());
    for u in corpus {
        let drift = support_norm(u, mesh, p, |r, _, d1, _| r.powf(a - 1.0) * d1);
        let grad = support_norm(u, mesh, p, |r, _, d1, _| (1.0 + r.powf(a)).sqrt() * d1);
        let op = support_norm(u, mesh, p, |r, v, d1, d2| {
            (1.0 + r.powf(a)) * (d2 + nm1 * d1 / r) - r.powf(beta) * v
        });
        let un = support_norm(u, mesh, p, |_, v, _, _| v);
        let rep = InequalityReport::upper("drift domination", drift, grad, 1e-12 * grad);
        if worst.as_ref().is_none_or(|w| rep.margin < w.margin) {
            worst = Some(rep);
        }
        rows.push((grad, op, un));
    }
    let fits = eps_list
        .iter()
        .map(|&eps| {
            let c = rows
                .iter()
                .map(|&(g, o, n)| if n > 0.0 { ((g - eps * o) / n).max(0.0) } else { 0.0 })
                .fold(0.0, f64::max);
            (eps, c)
        })
        .collect();
    Ok(DriftPerturbation {
        domination: worst.unwrap_or_else(|| InequalityReport::upper("drift domination", 0.0, 0.0, 0.0)),
        fits,
    })
}

