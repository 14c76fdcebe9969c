use crate::conditions::{tilde_c, OperatorParams};
use crate::error::{Error, Result};
use crate::grid::{RadialMesh, SmoothRadialFunction, SupportQuadrature};

fn require_alpha(params: &OperatorParams) -> Result<()> {
    if params.alpha() == 0.0 {
        Err(Error::Domain(
            "the drift-removing transform needs alpha > 0; use the b = 0 classification for alpha = 0".into(),
        ))
    } else {
        Ok(())
    }
}

/// `φ(r) = (1 + r^α)^{b/α}`.
pub fn phi_transform(r: f64, params: &OperatorParams) -> Result<f64> {
    require_alpha(params)?;
    Ok((1.0 + r.powf(params.alpha())).powf(params.b() / params.alpha()))
}

/// `U(r) = c̃ r^{α-2} - r^{2α-2}/(1 + r^α) (-b^2/4 + bα/2) + r^β`.
pub fn u_potential(r: f64, params: &OperatorParams) -> Result<f64> {
    require_alpha(params)?;
    let (a, b) = (params.alpha(), params.b());
    let ra = r.powf(a);
    let middle = -0.25 * b * b + 0.5 * b * a;
    Ok(tilde_c(params) * ra / (r * r) - ra * ra / (r * r * (1.0 + ra)) * middle + r.powf(params.beta()))
}

/// Relative residual of `(-A_{b,c})(φ^{-1/2} v) φ^{1/2} = -(1 + r^α) Δv + U v`.
///
/// The left side is built from closed-form derivatives of `φ^{-1/2} v`. Returns
/// `∫ |lhs - rhs| / ∫ |rhs|` over the support of `v`.
pub fn conjugation_residual(params: &OperatorParams, v: &dyn SmoothRadialFunction, mesh: &RadialMesh) -> Result<f64> {
    require_alpha(params)?;
    let (a, b) = (params.alpha(), params.b());
    let nm1 = params.n() - 1.0;
    let m = -b / (2.0 * a);
    let (lo, hi) = v.support();
    let q = SupportQuadrature::on_mesh(mesh, lo, hi, &v.breakpoints());
    let (mut diff, mut scale) = (0.0, 0.0);
    for (&r, w) in q.nodes.iter().zip(&q.weights) {
        let ra = r.powf(a);
        let s = 1.0 + ra;
        // g = φ^{-1/2} = s^m and its first two derivatives.
        let g = s.powf(m);
        let g1 = m * a * r.powf(a - 1.0) * s.powf(m - 1.0);
        let g2 = m * a * (a - 1.0) * r.powf(a - 2.0) * s.powf(m - 1.0)
            + m * (m - 1.0) * a * a * r.powf(2.0 * a - 2.0) * s.powf(m - 2.0);
        let (v0, v1, v2) = (v.value(r), v.d1(r), v.d2(r));
        let (w0, w1, w2) = (g * v0, g1 * v0 + g * v1, g2 * v0 + 2.0 * g1 * v1 + g * v2);
        let lhs = -params.apply_radial(r, w0, w1, w2) / g;
        let rhs = -s * (v2 + nm1 * v1 / r) + u_potential(r, params)? * v0;
        diff += w * (lhs - rhs).abs();
        scale += w * rhs.abs();
    }
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        let p = OperatorParams::new(3, 1.0, 1.5, 0.0, 0.7).unwrap();
        for r in [0.1, 1.0, 3.0] {
            assert_eq!(phi_transform(r, &p).unwrap(), 1.0);
            let expect = 0.7 / r + r.powf(1.5);
            assert!((u_potential(r, &p).unwrap() - expect).abs() < 1e-12 * expect.abs());
        }
        let p = OperatorParams::new(3, 1.0, 1.0, 2.0, 0.0).unwrap();
        for r in [0.1, 1.0, 3.0] {
            let expect = 2.0 / r + r;
            assert!((u_potential(r, &p).unwrap() - expect).abs() < 1e-12 * expect);
        }
        let p0 = OperatorParams::new(3, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(phi_transform(1.0, &p0).is_err());
        assert!(u_potential(1.0, &p0).is_err());
    }
}
