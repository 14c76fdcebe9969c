//! The bilinear form of `-A_{b,c} + λ` on real radial functions.
//!
//! ```text
//! a(u, v) = ∫ (1 + r^α) u' v' + (α - b) r^{α-1} u' v + c r^{α-2} u v + r^β u v + λ u v
//! ```
//!
//! with all integrals against `ω_{N-1} r^{N-1} dr`. Integrals of test functions use a
//! [`SupportQuadrature`] on the support of the integrand; [`FormMatrices`] is the nodal
//! assembly on a mesh.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::banded::Tridiagonal;
use crate::conditions::{lambda_min, OperatorParams};
use crate::error::{Error, Result};
use crate::grid::{gauss_legendre_5, sphere_area, GridFunction, RadialFunction, RadialMesh, SupportQuadrature};
use crate::report::InequalityReport;
use std::sync::Arc;

/// Default amount added to `λ_min` when no shift is given.
pub const DEFAULT_LAMBDA_MARGIN: f64 = 0.1;

/// Parameters and shift of the form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub params: OperatorParams,
    pub lambda: f64,
}

impl FormSpec {
    /// Requires `λ > λ_min(params)`.
    pub fn new(params: OperatorParams, lambda: f64) -> Result<Self> {
        let spec = Self { params, lambda };
        spec.check_lambda()?;
        Ok(spec)
    }

    /// Form with shift `λ_min + margin`.
    pub fn with_margin(params: OperatorParams, margin: f64) -> Result<Self> {
        let lm = lambda_min(&params).map_err(|e| Error::Precondition(e.to_string()))?;
        Self::new(params, lm + margin)
    }

    /// No check on `λ`; intended for falsification runs.
    pub fn new_unchecked(params: OperatorParams, lambda: f64) -> Self {
        Self { params, lambda }
    }

    /// The drift coefficient `α - b` of the `r^{α-1} u' v` term.
    pub fn drift_coefficient(&self) -> f64 {
        self.params.alpha() - self.params.b()
    }

    /// Coefficient of `r^{α-2} u^2` in `Re a(u, u)`.
    pub fn real_part_coefficient(&self) -> f64 {
        let p = &self.params;
        p.c() - 0.5 * (p.alpha() - p.b()) * (p.alpha() - 2.0 + p.n())
    }

    pub fn check_lambda(&self) -> Result<()> {
        let lm = lambda_min(&self.params).map_err(|e| Error::Precondition(e.to_string()))?;
        if self.lambda > lm {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "lambda = {} must exceed lambda_min = {lm}",
                self.lambda
            )))
        }
    }
}

fn intersect(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo < hi).then_some((lo, hi))
}

fn union(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.min(b.0), a.1.max(b.1))
}

fn rule(mesh: &RadialMesh, span: (f64, f64), fs: &[&dyn RadialFunction]) -> SupportQuadrature {
    let mut bps: Vec<f64> = fs.iter().flat_map(|f| f.breakpoints()).collect();
    for f in fs {
        let (lo, hi) = f.support();
        bps.push(lo);
        bps.push(hi);
    }
    SupportQuadrature::on_mesh(mesh, span.0, span.1, &bps)
}

/// `a(u, v)` by quadrature over the common support.
pub fn form_value(spec: &FormSpec, u: &dyn RadialFunction, v: &dyn RadialFunction, mesh: &RadialMesh) -> f64 {
    let Some(span) = intersect(u.support(), v.support()) else {
        return 0.0;
    };
    let q = rule(mesh, span, &[u, v]);
    let p = &spec.params;
    let (a, beta, c, lam) = (p.alpha(), p.beta(), p.c(), spec.lambda);
    let drift = spec.drift_coefficient();
    q.integrate(|r| {
        let (uu, du) = (u.value(r), u.d1(r));
        let (vv, dv) = (v.value(r), v.d1(r));
        let ra = r.powf(a);
        (1.0 + ra) * du * dv
            + drift * ra / r * du * vv
            + (c * ra / (r * r) + r.powf(beta) + lam) * uu * vv
    })
}

/// Integrals `(∫ u'^2, ∫ r^α u'^2, ∫ r^{α-2} u^2, ∫ r^β u^2, ∫ u^2)` over the support of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticParts {
    pub grad: f64,
    pub weighted_grad: f64,
    pub singular: f64,
    pub growth: f64,
    pub mass: f64,
}

pub fn quadratic_parts(params: &OperatorParams, u: &dyn RadialFunction, mesh: &RadialMesh) -> QuadraticParts {
    let span = u.support();
    let q = rule(mesh, span, &[u]);
    let (a, beta) = (params.alpha(), params.beta());
    let mut out = QuadraticParts {
        grad: 0.0,
        weighted_grad: 0.0,
        singular: 0.0,
        growth: 0.0,
        mass: 0.0,
    };
    for (&r, w) in q.nodes.iter().zip(&q.weights) {
        let (uu, du) = (u.value(r), u.d1(r));
        let ra = r.powf(a);
        out.grad += w * du * du;
        out.weighted_grad += w * ra * du * du;
        out.singular += w * ra / (r * r) * uu * uu;
        out.growth += w * r.powf(beta) * uu * uu;
        out.mass += w * uu * uu;
    }
    out
}

fn re_from_parts(spec: &FormSpec, q: &QuadraticParts, extra_mass: f64) -> f64 {
    q.grad + q.weighted_grad + spec.real_part_coefficient() * q.singular + q.growth
        + (spec.lambda + extra_mass) * q.mass
}

/// `Re a(u, u)` from the integrated-by-parts formula.
pub fn re_form_quadratic(spec: &FormSpec, u: &dyn RadialFunction, mesh: &RadialMesh) -> f64 {
    re_from_parts(spec, &quadratic_parts(&spec.params, u, mesh), 0.0)
}

/// `‖u‖_a`, the square root of `Re a(u, u) + ‖u‖_2^2`.
pub fn form_norm(spec: &FormSpec, u: &dyn RadialFunction, mesh: &RadialMesh) -> Result<f64> {
    let sq = re_from_parts(spec, &quadratic_parts(&spec.params, u, mesh), 1.0);
    if sq < 0.0 {
        return Err(Error::Domain(format!("negative form-norm radicand {sq:e}")));
    }
    Ok(sq.sqrt())
}

/// Relative tolerance of the lower estimates.
pub const LOWER_ESTIMATE_RTOL: f64 = 1e-8;

/// The four lower estimates `∫|∇u|^2 <= 2 Re a`, `∫(1+|x|^α)|∇u|^2 <= 3 Re a`,
/// `∫|x|^{α-2} u^2 <= Re a`, `∫|x|^β u^2 <= Re a`. Requires `λ > λ_min`.
pub fn check_lower_estimates(spec: &FormSpec, u: &dyn RadialFunction, mesh: &RadialMesh) -> Result<[InequalityReport; 4]> {
    spec.check_lambda()?;
    Ok(evaluate_lower_estimates(spec, u, mesh))
}

/// [`check_lower_estimates`] without the shift precondition.
pub fn evaluate_lower_estimates(spec: &FormSpec, u: &dyn RadialFunction, mesh: &RadialMesh) -> [InequalityReport; 4] {
    let q = quadratic_parts(&spec.params, u, mesh);
    let re = re_from_parts(spec, &q, 0.0);
    let ctx = format!("lambda = {}, Re a(u,u) = {re:e}", spec.lambda);
    let mk = |name: &str, lhs: f64, rhs: f64| {
        InequalityReport::upper(name, lhs, rhs, LOWER_ESTIMATE_RTOL * rhs.abs()).with_context(ctx.clone())
    };
    [
        mk("gradient <= 2 Re a", q.grad, 2.0 * re),
        mk("weighted gradient <= 3 Re a", q.grad + q.weighted_grad, 3.0 * re),
        mk("singular potential <= Re a", q.singular, re),
        mk("growth potential <= Re a", q.growth, re),
    ]
}

/// `|∫ r^{α-1} u' v| <= (∫ r^α u'^2)^{1/2} (∫ r^{α-2} v^2)^{1/2}`, all on one quadrature rule.
pub fn continuity_bound(u: &dyn RadialFunction, v: &dyn RadialFunction, mesh: &RadialMesh, alpha: f64) -> InequalityReport {
    let span = union(u.support(), v.support());
    let q = rule(mesh, span, &[u, v]);
    let (mut cross, mut gu, mut sv) = (0.0, 0.0, 0.0);
    for (&r, w) in q.nodes.iter().zip(&q.weights) {
        let (du, vv) = (u.d1(r), v.value(r));
        let ra = r.powf(alpha);
        cross += w * ra / r * du * vv;
        gu += w * ra * du * du;
        sv += w * ra / (r * r) * vv * vv;
    }
    let rhs = gu.sqrt() * sv.sqrt();
    InequalityReport::upper("drift continuity", cross.abs(), rhs, 1e-12 * rhs)
        .with_context(format!("alpha = {alpha}"))
}

/// Log-linear cutoff equal to 1 on `[2/n, n]`, 0 outside `(1/n, 2n)`, with `r |φ'| <= 1/ln 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreCutoff {
    pub n: f64,
}

impl CoreCutoff {
    /// The constant `C` in `|φ'(r)| <= C/r`.
    pub const GRADIENT_CONSTANT: f64 = std::f64::consts::LOG2_E;

    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "cutoff index must be positive");
        Self { n: n as f64 }
    }

    fn ramps(&self, r: f64) -> ((f64, f64), (f64, f64)) {
        let ln2 = std::f64::consts::LN_2;
        let up = (r * self.n).ln() / ln2;
        let down = 1.0 - (r / self.n).ln() / ln2;
        let up = if up <= 0.0 {
            (0.0, 0.0)
        } else if up >= 1.0 {
            (1.0, 0.0)
        } else {
            (up, 1.0 / (r * ln2))
        };
        let down = if down <= 0.0 {
            (0.0, 0.0)
        } else if down >= 1.0 {
            (1.0, 0.0)
        } else {
            (down, -1.0 / (r * ln2))
        };
        (up, down)
    }
}

impl RadialFunction for CoreCutoff {
    fn value(&self, r: f64) -> f64 {
        let (u, d) = self.ramps(r);
        u.0.min(d.0)
    }

    fn d1(&self, r: f64) -> f64 {
        let (u, d) = self.ramps(r);
        if u.0 <= d.0 {
            u.1
        } else {
            d.1
        }
    }

    fn support(&self) -> (f64, f64) {
        (1.0 / self.n, 2.0 * self.n)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![1.0 / self.n, 2.0 / self.n, self.n, 2.0 * self.n];
        if 2.0 / self.n > self.n {
            // Empty plateau: the two ramps cross at √2.
            b.push(std::f64::consts::SQRT_2);
        }
        b
    }
}

/// Nodal values of the cutoff `φ_n`.
pub fn core_cutoff(n: u32, mesh: Arc<RadialMesh>) -> GridFunction {
    let phi = CoreCutoff::new(n);
    GridFunction::from_fn(mesh, |r| phi.value(r))
}

/// `(φ_n - 1) u`.
pub struct CutoffDefect<'a> {
    pub cutoff: CoreCutoff,
    pub inner: &'a dyn RadialFunction,
}

impl RadialFunction for CutoffDefect<'_> {
    fn value(&self, r: f64) -> f64 {
        (self.cutoff.value(r) - 1.0) * self.inner.value(r)
    }

    fn d1(&self, r: f64) -> f64 {
        self.cutoff.d1(r) * self.inner.value(r) + (self.cutoff.value(r) - 1.0) * self.inner.d1(r)
    }

    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.cutoff.breakpoints();
        b.extend(self.inner.breakpoints());
        b
    }
}

/// `‖φ_n u - u‖_a` for each `n` in `n_list`.
pub fn core_convergence_experiment(
    spec: &FormSpec,
    u: &dyn RadialFunction,
    n_list: &[u32],
    mesh: &RadialMesh,
) -> Result<Vec<f64>> {
    n_list
        .iter()
        .map(|&n| {
            let defect = CutoffDefect {
                cutoff: CoreCutoff::new(n),
                inner: u,
            };
            form_norm(spec, &defect, mesh)
        })
        .collect()
}

/// Nodal assembly of the form: `a_h(u, v) = v^T (S + D) u`.
///
/// `S` is the piecewise-linear stiffness matrix of `(1 + r^α)` (five-point Gauss rule per
/// cell) plus the potential and shift lumped onto the diagonal with the mesh weights.
/// `D` is the drift term `(α - b) r^{α-1} u' v` with centered differences, not symmetrized.
#[derive(Debug, Clone)]
pub struct FormMatrices {
    pub symmetric: Tridiagonal,
    pub drift: Tridiagonal,
    pub mesh: Arc<RadialMesh>,
}

impl FormMatrices {
    pub fn assemble(spec: &FormSpec, mesh: Arc<RadialMesh>) -> Self {
        let n = mesh.len();
        let r = mesh.nodes();
        let w = mesh.quad_weights();
        let p = &spec.params;
        let a = p.alpha();
        let omega = sphere_area(mesh.dim());
        let nm1 = (mesh.dim() - 1) as i32;
        let (gx, gw) = gauss_legendre_5();
        let mut s = Tridiagonal::zeros(n);
        for i in 0..n - 1 {
            let (x0, x1) = (r[i], r[i + 1]);
            let h = x1 - x0;
            let (mid, half) = (0.5 * (x0 + x1), 0.5 * h);
            let k: f64 = gx
                .iter()
                .zip(&gw)
                .map(|(x, g)| {
                    let rr = mid + half * x;
                    g * half * (1.0 + rr.powf(a)) * rr.powi(nm1)
                })
                .sum::<f64>()
                * omega
                / (h * h);
            s.diag[i] += k;
            s.diag[i + 1] += k;
            s.upper[i] -= k;
            s.lower[i + 1] -= k;
        }
        for i in 0..n {
            s.diag[i] += w[i] * (p.potential(r[i]) + spec.lambda);
        }
        let mut d = Tridiagonal::zeros(n);
        let drift = spec.drift_coefficient();
        for i in 0..n {
            let coef = w[i] * drift * r[i].powf(a - 1.0);
            if i == 0 {
                let h = r[1] - r[0];
                d.diag[0] = -coef / h;
                d.upper[0] = coef / h;
            } else if i == n - 1 {
                let h = r[i] - r[i - 1];
                d.lower[i] = -coef / h;
                d.diag[i] = coef / h;
            } else {
                let (l, c, u) = mesh.derivative_row(i);
                d.lower[i] = coef * l;
                d.diag[i] = coef * c;
                d.upper[i] = coef * u;
            }
        }
        Self {
            symmetric: s,
            drift: d,
            mesh,
        }
    }

    /// `v^T (S + D) u`.
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        let su = self.symmetric.matvec(u);
        let du = self.drift.matvec(u);
        su.iter().zip(&du).zip(v).map(|((a, b), c)| (a + b) * c).sum()
    }

    /// Writes `S` and `D` as whitespace-separated `matrix row col value` lines.
    pub fn write_triples(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "# matrix row col value")?;
        for (name, m) in [("S", &self.symmetric), ("D", &self.drift)] {
            for (i, j, v) in m.triples() {
                writeln!(out, "{name} {i} {j} {v:e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grading, TestFunction};

    fn p(b: f64, c: f64) -> OperatorParams {
        OperatorParams::new(3, 1.0, 1.0, b, c).unwrap()
    }

    #[test]
    fn spec_requires_shift() {
        assert!(FormSpec::new(p(0.0, 0.0), 8.0).is_err());
        assert!(FormSpec::new(p(0.0, 0.0), 8.1).is_ok());
        let spec = FormSpec::new_unchecked(p(0.0, 0.0), 0.0);
        let mesh = RadialMesh::new(0.1, 4.0, 64, Grading::LogGraded, 3).unwrap();
        let u = TestFunction::Bump { lo: 1.0, hi: 2.0 };
        assert!(matches!(
            check_lower_estimates(&spec, &u, &mesh),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_function() {
        let spec = FormSpec::new(p(0.0, 0.0), 8.1).unwrap();
        let mesh = RadialMesh::new(0.1, 4.0, 64, Grading::LogGraded, 3).unwrap();
        let z = TestFunction::Bump { lo: 1.0, hi: 2.0 }.scaled(0.0);
        assert_eq!(form_value(&spec, &z, &z, &mesh), 0.0);
        assert_eq!(re_form_quadratic(&spec, &z, &mesh), 0.0);
        assert_eq!(form_norm(&spec, &z, &mesh).unwrap(), 0.0);
        for r in check_lower_estimates(&spec, &z, &mesh).unwrap() {
            assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
        }
    }

    #[test]
    fn disjoint_supports() {
        let spec = FormSpec::new(p(3.0, 0.0), 100.0).unwrap();
        let mesh = RadialMesh::new(0.1, 4.0, 64, Grading::LogGraded, 3).unwrap();
        let u = TestFunction::Bump { lo: 0.5, hi: 1.0 };
        let v = TestFunction::Bump { lo: 2.0, hi: 3.0 };
        assert_eq!(form_value(&spec, &u, &v, &mesh), 0.0);
    }

    #[test]
    fn cutoff_shape() {
        let c = CoreCutoff::new(4);
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(4.0), 1.0);
        assert_eq!(c.value(2.0), 1.0);
        let mid = c.value(3.0 / 8.0);
        assert!(mid > 0.0 && mid < 1.0);
        assert_eq!(c.value(0.2), 0.0);
        assert_eq!(c.value(9.0), 0.0);
        let one = CoreCutoff::new(1);
        assert!(one.value(1.5) > 0.0 && one.value(1.5) < 1.0);
    }

    #[test]
    fn triples_export() {
        let spec = FormSpec::new(p(0.0, 0.0), 8.1).unwrap();
        let mesh = Arc::new(RadialMesh::new(0.1, 4.0, 16, Grading::LogGraded, 3).unwrap());
        let m = FormMatrices::assemble(&spec, mesh);
        let mut buf = Vec::new();
        m.write_triples(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().filter(|l| l.starts_with("S ")).count() == 17 * 3 - 2);
    }
}
