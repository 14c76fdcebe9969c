use serde::{Deserialize, Serialize};

use super::hardy::ZERO_FLOOR;
use crate::conditions::{k_constants, KConstants, LpContext, OperatorParams};
use crate::error::{Error, Result};
use crate::grid::{RadialMesh, SmoothRadialFunction, SupportQuadrature, TestFunction};
use crate::grid::RadialFunction;
use crate::report::InequalityReport;

/// Yosida approximation `W_ε = W/(1 + εW) = 1/(r^{2-α} + ε)` of `W = r^{α-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YosidaPotential {
    pub epsilon: f64,
    pub alpha: f64,
}

impl YosidaPotential {
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { epsilon, alpha })
    }

    pub fn value(&self, r: f64) -> f64 {
        1.0 / (r.powf(2.0 - self.alpha) + self.epsilon)
    }
}

/// Data of the auxiliary function `q` bounding the perturbation estimate from below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QFunctionSpec {
    pub k: KConstants,
    pub a1: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub alpha: f64,
    pub k_target: f64,
}

/// `q(r) = k1 + k2 r^{-α} + r^{β-α+2} + a1 r^{2-α} + ε (k3 r^{α-2} + k4 r^{-2} + a1)`.
pub fn q_function(r: f64, spec: &QFunctionSpec) -> f64 {
    let (a, k) = (spec.alpha, &spec.k);
    k.k1 + k.k2 * r.powf(-a)
        + r.powf(spec.beta - a + 2.0)
        + spec.a1 * r.powf(2.0 - a)
        + spec.epsilon * (k.k3 * r.powf(a - 2.0) + k.k4 / (r * r) + spec.a1)
}

/// Result of an `a1` search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum A1Outcome {
    Found {
        a1: f64,
        /// `min_r (k3 r^{α-2} + k4 r^{-2})`, or `None` when the windowed search was used.
        nu1: Option<f64>,
        /// `min_r (k1 + k2 r^{-α} + r^{β-α+2} - k_target)`, when computed.
        nu2: Option<f64>,
        /// First zero of that function when `nu2 < 0`.
        r1: Option<f64>,
        /// `ε` range over which `q >= k_target` is guaranteed.
        eps_window: (f64, f64),
        /// Minimum of `q` over the posterior grid and `ε ∈ {1e-3, 1e-2, 0.1, 1}` within the window.
        posterior_min: f64,
    },
    Infeasible {
        reason: String,
    },
}

impl A1Outcome {
    pub fn a1(&self) -> Option<f64> {
        match self {
            A1Outcome::Found { a1, .. } => Some(*a1),
            A1Outcome::Infeasible { .. } => None,
        }
    }
}

/// Log-spaced radii on `[1e-6, 1e6]` used for posterior checks.
pub fn posterior_grid(points: usize) -> Vec<f64> {
    let (l0, l1) = (-6.0 * std::f64::consts::LN_10, 6.0 * std::f64::consts::LN_10);
    (0..points)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

const POSTERIOR_EPS: [f64; 4] = [1e-3, 1e-2, 0.1, 1.0];

fn posterior_min(k: &KConstants, params: &OperatorParams, a1: f64, k_target: f64, window: (f64, f64)) -> f64 {
    let grid = posterior_grid(10_000);
    let mut m = f64::INFINITY;
    for eps in POSTERIOR_EPS.iter().copied().filter(|e| *e >= window.0 && *e <= window.1) {
        let spec = QFunctionSpec {
            k: *k,
            a1,
            epsilon: eps,
            beta: params.beta(),
            alpha: params.alpha(),
            k_target,
        };
        for &r in &grid {
            m = m.min(q_function(r, &spec));
        }
    }
    m
}

/// `a1` from the constructive recipe, valid uniformly for `ε ∈ (0, 1]`.
///
/// `ν1 = min (k3 r^{α-2} + k4 r^{-2})` and `ν2 = min h` with `h = k1 + k2 r^{-α} + r^{β-α+2} - k_target`
/// are computed in closed form; `r1` is the first zero of `h` by bisection. Returns
/// `a1 = max(-ν1, -ν2 / r1^{2-α}, 0)`. Needs `lim_{r→0} h > 0`, which holds when `k2 > 0`
/// (and `α > 0`) or when `k2 = 0` and `k_target < k1`; otherwise the result is infeasible.
pub fn a1_search(params: &OperatorParams, ctx: &LpContext, k_target: f64) -> A1Outcome {
    let k = k_constants(params, ctx);
    let (a, beta) = (params.alpha(), params.beta());
    // Limit of h at the origin.
    let h0 = if a == 0.0 {
        k.k1 + k.k2 - k_target
    } else if k.k2 > 0.0 {
        f64::INFINITY
    } else if k.k2 == 0.0 {
        k.k1 - k_target
    } else {
        f64::NEG_INFINITY
    };
    if h0 <= 0.0 {
        return A1Outcome::Infeasible {
            reason: format!(
                "k2 = {:.6e}, k1 = {:.6e}, k_target = {k_target}: the limit of k1 + k2 r^-alpha + r^(beta-alpha+2) \
                 at the origin is {h0}, not above k_target",
                k.k2, k.k1
            ),
        };
    }
    // ν1 over s = 1/r: k3 s^{2-α} + k4 s^2.
    let nu1 = if k.k3 >= 0.0 {
        0.0
    } else if a == 0.0 {
        if k.k3 + k.k4 >= 0.0 {
            0.0
        } else {
            return A1Outcome::Infeasible {
                reason: format!("alpha = 0 and k3 + k4 = {} < 0", k.k3 + k.k4),
            };
        }
    } else {
        let s = ((a - 2.0) * k.k3 / (2.0 * k.k4)).powf(1.0 / a);
        s.powf(2.0 - a) * k.k3 * a / 2.0
    };
    let h = |r: f64| k.k1 + k.k2 * r.powf(-a) + r.powf(beta - a + 2.0) - k_target;
    let (nu2, rstar) = if k.k2 > 0.0 && a > 0.0 {
        let rs = (a * k.k2 / (beta - a + 2.0)).powf(1.0 / (beta + 2.0));
        (h(rs), rs)
    } else {
        (h0, 0.0)
    };
    let mut r1 = None;
    let mut a1 = (-nu1).max(0.0);
    if nu2 < 0.0 {
        // h decreases from +∞ to ν2 on (0, r*).
        let mut lo = rstar;
        while h(lo) <= 0.0 {
            lo *= 0.5;
        }
        let mut hi = rstar;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r1 = Some(lo);
        a1 = a1.max(-nu2 / lo.powf(2.0 - a));
    }
    let window = (0.0, 1.0);
    A1Outcome::Found {
        a1,
        nu1: Some(nu1),
        nu2: Some(nu2),
        r1,
        eps_window: window,
        posterior_min: posterior_min(&k, params, a1, k_target, window),
    }
}

/// `a1` making `q >= k_target` for `ε ∈ [eps_min, 1]` only.
///
/// Since `q` is affine in `ε` it suffices to treat `ε = eps_min` and `ε = 1`; the bound
/// `a1 >= (k_target - q|_{a1=0}) / (r^{2-α} + ε)` is maximized over a log-grid and refined
/// by golden-section search. This covers parameters outside the recipe of [`a1_search`]
/// (e.g. `k2 < 0` above the critical exponent), where no `ε`-uniform `a1` exists.
pub fn a1_search_windowed(params: &OperatorParams, ctx: &LpContext, k_target: f64, eps_min: f64) -> A1Outcome {
    if !(eps_min > 0.0 && eps_min <= 1.0) {
        return A1Outcome::Infeasible {
            reason: format!("eps_min must lie in (0, 1], got {eps_min}"),
        };
    }
    let k = k_constants(params, ctx);
    let (a, beta) = (params.alpha(), params.beta());
    let need = |r: f64, eps: f64| {
        let base = k.k1 + k.k2 * r.powf(-a) + r.powf(beta - a + 2.0) + eps * (k.k3 * r.powf(a - 2.0) + k.k4 / (r * r));
        (k_target - base) / (r.powf(2.0 - a) + eps)
    };
    let grid = posterior_grid(20_000);
    let mut a1 = 0.0_f64;
    for eps in [eps_min, 1.0] {
        let f = |lr: f64| need(lr.exp(), eps);
        let (mut best, mut at) = (f64::NEG_INFINITY, 0usize);
        for (i, r) in grid.iter().enumerate() {
            let v = f(r.ln());
            if v > best {
                best = v;
                at = i;
            }
        }
        let (mut lo, mut hi) = (grid[at.saturating_sub(1)].ln(), grid[(at + 1).min(grid.len() - 1)].ln());
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if f(x1) > f(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        best = best.max(f(0.5 * (lo + hi)));
        a1 = a1.max(best);
    }
    // Small relative cushion against rounding in the maximization.
    let a1 = if a1 > 0.0 { a1 * (1.0 + 1e-9) + 1e-12 } else { 0.0 };
    let window = (eps_min, 1.0);
    A1Outcome::Found {
        a1,
        nu1: None,
        nu2: None,
        r1: None,
        eps_window: window,
        posterior_min: posterior_min(&k, params, a1, k_target, window),
    }
}

/// Checks `Re ⟨-A_{b,c} u, W_ε^{p-1} u |u|^{p-2}⟩ >= k_target ‖W_ε u‖_p^p - a1 ‖W_ε u‖_p^{p-1} ‖u‖_p`.
///
/// `A_{b,c} u` is evaluated from the analytic derivatives of `u`, so the margin reflects only
/// quadrature error. Requires `p <= (N-α)/(2-α)`; see [`okazawa_estimate_evaluate`] for the
/// unguarded version.
#[allow(clippy::too_many_arguments)]
pub fn okazawa_estimate_check(
    params: &OperatorParams,
    ctx: &LpContext,
    u: &TestFunction,
    eps: f64,
    a1: f64,
    k_target: f64,
    mesh: &RadialMesh,
    tol: f64,
) -> Result<InequalityReport> {
    if !ctx.subcritical_or_critical() {
        return Err(Error::Precondition(format!(
            "p = {} exceeds the critical exponent {}",
            ctx.p, ctx.threshold_p
        )));
    }
    okazawa_estimate_evaluate(params, ctx, u, eps, a1, k_target, mesh, tol)
}

#[allow(clippy::too_many_arguments)]
pub fn okazawa_estimate_evaluate(
    params: &OperatorParams,
    ctx: &LpContext,
    u: &dyn SmoothRadialFunction,
    eps: f64,
    a1: f64,
    k_target: f64,
    mesh: &RadialMesh,
    tol: f64,
) -> Result<InequalityReport> {
    let w = YosidaPotential::new(eps, params.alpha())?;
    let p = ctx.p;
    let (lo, hi) = u.support();
    let q = SupportQuadrature::on_mesh(mesh, lo, hi, &u.breakpoints());
    let (mut lhs, mut wu, mut uu) = (0.0, 0.0, 0.0);
    for (&r, wt) in q.nodes.iter().zip(&q.weights) {
        let v = u.value(r);
        let a = v.abs();
        if a < ZERO_FLOOR {
            continue;
        }
        let we = w.value(r);
        let au = params.apply_radial(r, v, u.d1(r), u.d2(r));
        lhs += wt * (-au) * we.powf(p - 1.0) * v.signum() * a.powf(p - 1.0);
        wu += wt * (we * a).powf(p);
        uu += wt * a.powf(p);
    }
    let wnorm = wu.powf(1.0 / p);
    let unorm = uu.powf(1.0 / p);
    let rhs = k_target * wu - a1 * wnorm.powf(p - 1.0) * unorm;
    Ok(InequalityReport::lower("Yosida perturbation estimate", lhs, rhs, tol * (1.0 + rhs.abs()))
        .with_context(format!("p = {p}, eps = {eps}, a1 = {a1}, k_target = {k_target}")))
}

/// `⟨u, W_ε^{p-1} u |u|^{p-2}⟩ = ∫ W_ε^{p-1} |u|^p >= 0`.
pub fn okazawa_pairing_nonnegative(
    params: &OperatorParams,
    p: f64,
    u: &dyn RadialFunction,
    eps: f64,
    mesh: &RadialMesh,
) -> Result<InequalityReport> {
    let w = YosidaPotential::new(eps, params.alpha())?;
    let (lo, hi) = u.support();
    let q = SupportQuadrature::on_mesh(mesh, lo, hi, &u.breakpoints());
    let s = q.integrate(|r| w.value(r).powf(p - 1.0) * u.value(r).abs().powf(p));
    Ok(InequalityReport::lower("pairing nonnegative", s, 0.0, 0.0))
}
