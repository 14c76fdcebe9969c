use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::evolve::{implicit_euler_evolve, Trajectory};
use super::operator::{assemble_generator, DiscreteOperator, Potential};
use crate::conditions::{formal_adjoint_params, OperatorParams};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, RadialMesh, TestFunction};
use crate::inequalities::duality_map;
use crate::report::InequalityReport;

/// `‖u^{k+1}‖_p <= (1 + tol) ‖u^k‖_p` for every step of a trajectory of `A_h - λ`.
///
/// Reports the largest step ratio as `lhs` against `rhs = 1`.
pub fn check_quasi_contractivity(traj: &Trajectory, p: f64, lambda_used: f64, tol: f64) -> InequalityReport {
    let norms = traj.norm_sequence(p);
    let mut worst = 0.0_f64;
    for w in norms.windows(2) {
        let ratio = if w[0] > 0.0 {
            w[1] / w[0]
        } else if w[1] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(ratio);
    }
    InequalityReport::upper(format!("L^{p} non-expansive"), worst, 1.0, tol).with_context(format!(
        "shift lambda = {lambda_used}, {} steps; radial subspace on a truncated shell",
        norms.len().saturating_sub(1)
    ))
}

/// Positivity `min u^k >= -tol` and, when `c >= 0`, the sub-Markov bound `max u^k <= 1 + tol`.
///
/// Applies to nonnegative initial data bounded by one; the caller is responsible for that.
pub fn check_positivity_submarkov(traj: &Trajectory, c: f64, tol: f64) -> Vec<InequalityReport> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in &traj.states {
        for &v in &s.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let mut out = vec![InequalityReport::lower("positivity", lo, 0.0, tol)
        .with_context(format!("minimum over {} levels", traj.states.len()))];
    if c >= 0.0 {
        out.push(
            InequalityReport::upper("sub-Markov", hi, 1.0, tol)
                .with_context(format!("c = {c} >= 0, maximum over all levels")),
        );
    }
    out
}

/// Nodal `W_n = max(-n, c r^{α-2})`.
pub fn truncated_potential(params: &OperatorParams, mesh: &RadialMesh, n: f64) -> Vec<f64> {
    mesh.nodes()
        .iter()
        .map(|&r| (params.c() * r.powf(params.alpha() - 2.0)).max(-n))
        .collect()
}

/// Evolutions with truncated potentials `W_n` for increasing `n`.
#[derive(Debug, Clone)]
pub struct TruncationExperiment {
    pub n_list: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
    /// `0 <= u_n^k` and `u_n^k <= u_{n'}^k + tol` for consecutive levels.
    pub monotonicity: InequalityReport,
    pub positivity: InequalityReport,
    /// `sup_{k,i} |u_{n_{j+1}} - u_{n_j}|`.
    pub sup_differences: Vec<f64>,
    /// Consecutive quotients of `sup_differences`.
    pub decay_ratios: Vec<f64>,
    pub max_stable_dt: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn truncated_potential_experiment(
    params: &OperatorParams,
    mesh: Arc<RadialMesh>,
    lambda: f64,
    n_list: &[f64],
    u0: &GridFunction,
    dt: f64,
    steps: usize,
    tol: f64,
) -> Result<TruncationExperiment> {
    if params.c() >= 0.0 {
        return Err(Error::Precondition(format!(
            "truncated potentials need c < 0, got c = {}",
            params.c()
        )));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("n_list must be increasing".into()));
    }
    if u0.values.iter().any(|&v| v < 0.0) {
        return Err(Error::Precondition("initial datum must be nonnegative".into()));
    }
    let mut trajectories = Vec::with_capacity(n_list.len());
    let mut max_stable_dt = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let w = truncated_potential(params, &mesh, n);
        let op = assemble_generator(params, mesh.clone(), lambda, Potential::ReplaceSingular(w))?;
        max_stable_dt.push(op.certificate().max_dt);
        trajectories.push(implicit_euler_evolve(&op, u0, dt, steps, &[])?);
    }
    let mut worst_order = f64::INFINITY;
    let mut min_value = f64::INFINITY;
    let mut sup_differences = Vec::new();
    for t in &trajectories {
        for s in &t.states {
            min_value = s.values.iter().fold(min_value, |m, &v| m.min(v));
        }
    }
    for pair in trajectories.windows(2) {
        let mut sup = 0.0_f64;
        for (a, b) in pair[0].states.iter().zip(&pair[1].states) {
            for (x, y) in a.values.iter().zip(&b.values) {
                worst_order = worst_order.min(y - x);
                sup = sup.max((y - x).abs());
            }
        }
        sup_differences.push(sup);
    }
    if !worst_order.is_finite() {
        worst_order = 0.0;
    }
    let decay_ratios = sup_differences.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(TruncationExperiment {
        n_list: n_list.to_vec(),
        trajectories,
        monotonicity: InequalityReport::lower("monotone in n", worst_order, 0.0, tol)
            .with_context("min over steps and nodes of u_{n+1} - u_n"),
        positivity: InequalityReport::lower("truncated positivity", min_value, 0.0, tol),
        sup_differences,
        decay_ratios,
        max_stable_dt,
    })
}

/// `⟨A_h u, v⟩ - ⟨u, A_h^* v⟩` in the weighted inner product, with `A_h^*` the generator of
/// the formal adjoint coefficients.
pub fn pairing_defect(op: &DiscreteOperator, adjoint: &DiscreteOperator, u: &[f64], v: &[f64]) -> (f64, f64) {
    let w = op.mesh.quad_weights();
    let au = op.apply(u);
    let av = adjoint.apply(v);
    let lhs: f64 = w.iter().zip(&au).zip(v).map(|((w, a), b)| w * a * b).sum();
    let rhs: f64 = w.iter().zip(u).zip(&av).map(|((w, a), b)| w * a * b).sum();
    (lhs, lhs - rhs)
}

/// Refinement study of the adjoint pairing defect.
#[derive(Debug, Clone, Serialize)]
pub struct AdjointStudy {
    pub adjoint: OperatorParams,
    pub coarse_intervals: usize,
    pub fine_intervals: usize,
    pub coarse_defects: Vec<f64>,
    pub fine_defects: Vec<f64>,
    /// Sum of coarse defects over sum of fine defects.
    pub ratio: f64,
    pub report: InequalityReport,
}

/// Compares `⟨A_h u, v⟩` with `⟨u, A_h^* v⟩` on `mesh` and on the mesh with twice the
/// intervals, and checks that the aggregate defect shrinks by at least `min_ratio`.
pub fn adjoint_consistency(
    params: &OperatorParams,
    mesh: Arc<RadialMesh>,
    lambda: f64,
    pairs: &[(TestFunction, TestFunction)],
    min_ratio: f64,
) -> Result<AdjointStudy> {
    let adjoint = formal_adjoint_params(params);
    let fine = Arc::new(mesh.with_intervals(2 * mesh.intervals())?);
    let defects = |m: &Arc<RadialMesh>| -> Result<Vec<f64>> {
        let op = assemble_generator(params, m.clone(), lambda, Potential::Standard)?;
        let adj = assemble_generator(&adjoint, m.clone(), lambda, Potential::Standard)?;
        Ok(pairs
            .iter()
            .map(|(u, v)| pairing_defect(&op, &adj, &u.sample(m), &v.sample(m)).1.abs())
            .collect())
    };
    let coarse_defects = defects(&mesh)?;
    let fine_defects = defects(&fine)?;
    let (sc, sf): (f64, f64) = (coarse_defects.iter().sum(), fine_defects.iter().sum());
    let ratio = if sf > 0.0 { sc / sf } else { f64::INFINITY };
    let report = InequalityReport::lower("adjoint defect refinement ratio", ratio, min_ratio, 0.0).with_context(format!(
        "adjoint b1 = {}, c1 = {}; M = {} -> {}; total defect {sc:e} -> {sf:e}",
        adjoint.b(),
        adjoint.c(),
        mesh.intervals(),
        fine.intervals()
    ));
    Ok(AdjointStudy {
        adjoint,
        coarse_intervals: mesh.intervals(),
        fine_intervals: fine.intervals(),
        coarse_defects,
        fine_defects,
        ratio,
        report,
    })
}

/// Empirical numerical range of `-A_h` on random complex vectors.
#[derive(Debug, Clone, Serialize)]
pub struct NumericalRangeSummary {
    pub samples: usize,
    pub min_re: f64,
    /// Largest `|Im z| / Re z` over samples with `Re z > 0`.
    pub max_ratio: f64,
    pub report: InequalityReport,
}

/// Samples `z = ⟨-A_h u, u⟩` for random unit `u = x + i y` (weighted norm) on interior nodes.
///
/// Only `min Re z >= -tol` is asserted; the ratio is reported as a sector diagnostic.
pub fn numerical_range_report(op: &DiscreteOperator, samples: usize, seed: u64, tol: f64) -> NumericalRangeSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = op.interior_weights();
    let m = op.matrix.len();
    let mut min_re = f64::INFINITY;
    let mut max_ratio = 0.0_f64;
    for _ in 0..samples.max(1) {
        let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = x
            .iter()
            .zip(&y)
            .zip(w)
            .map(|((a, b), w)| w * (a * a + b * b))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        x.iter_mut().chain(y.iter_mut()).for_each(|v| *v /= norm);
        let ax = op.matrix.matvec(&x);
        let ay = op.matrix.matvec(&y);
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(w).map(|((a, b), w)| w * a * b).sum() };
        let re = -(dot(&ax, &x) + dot(&ay, &y));
        let im = -(dot(&ay, &x) - dot(&ax, &y));
        min_re = min_re.min(re);
        if re > 0.0 {
            max_ratio = max_ratio.max(im.abs() / re);
        }
    }
    NumericalRangeSummary {
        samples,
        min_re,
        max_ratio,
        report: InequalityReport::lower("numerical range real part", min_re, 0.0, tol)
            .with_context(format!("{samples} random unit vectors, seed {seed}")),
    }
}

/// `⟨A_h u, F_p(u)⟩` in the weighted pairing; nonpositive values mean the shifted generator
/// is dissipative in `L^p` along `u`.
pub fn discrete_dissipativity(op: &DiscreteOperator, u: &GridFunction, p: f64) -> Result<f64> {
    let au = op.apply(&u.values);
    let f = duality_map(u, p)?;
    Ok(op.mesh.quad_weights().iter().zip(&au).zip(&f.values).map(|((w, a), b)| w * a * b).sum())
}
