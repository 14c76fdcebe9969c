use crate::grid::{RadialFunction, RadialMesh, SupportQuadrature};
use crate::report::InequalityReport;

/// Values of `|v|` below this are treated as zero in `|v|^{p-2}`.
pub const ZERO_FLOOR: f64 = 1e-14;

/// `((N - 2 + δ)/p)^2 ∫ |v|^p |x|^{δ-2} <= ∫ |∇v|^2 |v|^{p-2} |x|^δ`, integrated over the support of `v`.
///
/// Passes iff `lhs <= rhs (1 + 1e-8) + 1e-12`.
pub fn hardy_weighted(v: &dyn RadialFunction, delta: f64, p: f64, mesh: &RadialMesh) -> InequalityReport {
    hardy_weighted_with_floor(v, delta, p, mesh, ZERO_FLOOR)
}

/// [`hardy_weighted`] with an explicit zero floor for `|v|^{p-2}`.
pub fn hardy_weighted_with_floor(
    v: &dyn RadialFunction,
    delta: f64,
    p: f64,
    mesh: &RadialMesh,
    floor: f64,
) -> InequalityReport {
    let (lo, hi) = v.support();
    let q = SupportQuadrature::on_mesh(mesh, lo, hi, &v.breakpoints());
    let n = mesh.dim() as f64;
    let constant = ((n - 2.0 + delta) / p).powi(2);
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (&r, w) in q.nodes.iter().zip(&q.weights) {
        let a = v.value(r).abs();
        if a < floor {
            continue;
        }
        let d = v.d1(r);
        let rd = r.powf(delta);
        lhs += w * a.powf(p) * rd / (r * r);
        rhs += w * d * d * a.powf(p - 2.0) * rd;
    }
    lhs *= constant;
    InequalityReport::upper("weighted Hardy", lhs, rhs, 1e-8 * rhs + 1e-12)
        .with_context(format!("N = {n}, delta = {delta}, p = {p}"))
}
