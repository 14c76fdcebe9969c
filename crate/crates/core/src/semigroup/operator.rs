use std::sync::Arc;

use serde::Serialize;

use crate::banded::Tridiagonal;
use crate::conditions::OperatorParams;
use crate::error::{Error, Result};
use crate::grid::RadialMesh;

/// Zeroth-order coefficient `V` of the generator `… - (V + λ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `V = c r^{α-2} + r^β`.
    Standard,
    /// `V = W + r^β` with nodal values of `W` replacing `c r^{α-2}`.
    ReplaceSingular(Vec<f64>),
    /// `V` given directly at the nodes.
    Full(Vec<f64>),
}

/// M-matrix certificate for `I - dt A_h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MMatrixCertificate {
    /// All off-diagonal entries of `A_h` are nonnegative.
    pub offdiag_nonnegative: bool,
    pub min_offdiag: f64,
    /// Largest `dt` for which `I - dt A_h` is diagonally dominant with row sums `>= 1`
    /// wherever `A_h` has positive row sums (infinite when there are none).
    pub max_dt: f64,
}

impl MMatrixCertificate {
    pub fn holds_for(&self, dt: f64) -> bool {
        self.offdiag_nonnegative && dt > 0.0 && dt <= self.max_dt
    }
}

/// Tridiagonal realization of the radial `A_{b,c} - λ` with Dirichlet conditions at both radii.
///
/// `matrix` acts on the interior nodes `1..=M-1`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub matrix: Tridiagonal,
    pub params: OperatorParams,
    pub mesh: Arc<RadialMesh>,
    pub lambda: f64,
    /// Nodal values of `V` (without the shift).
    pub potential: Vec<f64>,
}

/// Assembles `A_h u_i = (1 + r_i^α)(Δ_h u)_i + b r_i^{α-1} (D_r u)_i - (V_i + λ) u_i` at interior nodes.
pub fn assemble_generator(
    params: &OperatorParams,
    mesh: Arc<RadialMesh>,
    lambda: f64,
    potential: Potential,
) -> Result<DiscreteOperator> {
    let n = mesh.len();
    if n < 5 {
        return Err(Error::Domain("mesh too small for the generator".into()));
    }
    let r = mesh.nodes();
    let (a, b, beta) = (params.alpha(), params.b(), params.beta());
    let v: Vec<f64> = match potential {
        Potential::Standard => r.iter().map(|&x| params.potential(x)).collect(),
        Potential::ReplaceSingular(w) | Potential::Full(w) if w.len() != n => {
            return Err(Error::Domain(format!("potential has {} values, mesh has {n}", w.len())));
        }
        Potential::ReplaceSingular(w) => r.iter().zip(&w).map(|(&x, wi)| wi + x.powf(beta)).collect(),
        Potential::Full(w) => w,
    };
    let m = n - 2;
    let mut mat = Tridiagonal::zeros(m);
    for k in 0..m {
        let i = k + 1;
        let (ll, ld, lu) = mesh.laplacian_row(i);
        let (dl, dd, du) = mesh.derivative_row(i);
        let diff = 1.0 + r[i].powf(a);
        let drift = b * r[i].powf(a - 1.0);
        if k > 0 {
            mat.lower[k] = diff * ll + drift * dl;
        }
        mat.diag[k] = diff * ld + drift * dd - v[i] - lambda;
        if k + 1 < m {
            mat.upper[k] = diff * lu + drift * du;
        }
    }
    Ok(DiscreteOperator {
        matrix: mat,
        params: *params,
        mesh,
        lambda,
        potential: v,
    })
}

impl DiscreteOperator {
    /// `A_h u` on all nodes. Interior rows use the boundary values of `u` as neighbours;
    /// boundary rows are zero.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.mesh.len();
        assert_eq!(u.len(), n);
        let r = self.mesh.nodes();
        let (a, b) = (self.params.alpha(), self.params.b());
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            let (ll, ld, lu) = self.mesh.laplacian_row(i);
            let (dl, dd, du) = self.mesh.derivative_row(i);
            let diff = 1.0 + r[i].powf(a);
            let drift = b * r[i].powf(a - 1.0);
            out[i] = (diff * ll + drift * dl) * u[i - 1]
                + (diff * ld + drift * dd - self.potential[i] - self.lambda) * u[i]
                + (diff * lu + drift * du) * u[i + 1];
        }
        out
    }

    pub fn certificate(&self) -> MMatrixCertificate {
        let m = &self.matrix;
        let k = m.len();
        let mut min_off = f64::INFINITY;
        let mut max_dt = f64::INFINITY;
        for i in 0..k {
            let mut row = m.diag[i];
            let mut size = m.diag[i].abs();
            if i > 0 {
                min_off = min_off.min(m.lower[i]);
                row += m.lower[i];
                size += m.lower[i].abs();
            }
            if i + 1 < k {
                min_off = min_off.min(m.upper[i]);
                row += m.upper[i];
                size += m.upper[i].abs();
            }
            // Row sums that vanish up to rounding do not restrict dt.
            if row > 1e-12 * size {
                max_dt = max_dt.min(1.0 / row);
            }
        }
        MMatrixCertificate {
            offdiag_nonnegative: min_off >= 0.0,
            min_offdiag: min_off,
            max_dt,
        }
    }

    /// Interior quadrature weights, matching the rows of `matrix`.
    pub fn interior_weights(&self) -> &[f64] {
        let w = self.mesh.quad_weights();
        &w[1..w.len() - 1]
    }
}
