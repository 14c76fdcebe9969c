use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quadrature::fornberg_weights;
use crate::error::{Error, Result};

/// Node distribution of a [`RadialMesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grading {
    Uniform,
    /// Nodes uniformly spaced in `ln r`.
    LogGraded,
}

/// Surface area `ω_{N-1} = 2 π^{N/2} / Γ(N/2)` of the unit sphere in `R^N`.
pub fn sphere_area(dim: u32) -> f64 {
    // Γ(N/2) by recursion from Γ(1) = 1 or Γ(1/2) = √π.
    let (mut x, mut g) = if dim.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, std::f64::consts::PI.sqrt())
    };
    let target = dim as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    2.0 * std::f64::consts::PI.powf(target) / g
}

/// `∫_a^{a+h} w(r) r^n dr` for the two linear hat pieces on a cell, returned as
/// `(weight of left node, weight of right node)`. Both sums have positive terms only.
fn cell_hat_moments(a: f64, h: f64, n: u32) -> (f64, f64) {
    let mut left = 0.0;
    let mut right = 0.0;
    let mut binom = 1.0;
    let mut hj = 1.0;
    let n_i = n as i32;
    for j in 0..=n {
        let term = binom * a.powi(n_i - j as i32) * hj;
        let jf = j as f64;
        right += term / (jf + 2.0);
        left += term / ((jf + 1.0) * (jf + 2.0));
        binom = binom * (n - j) as f64 / (jf + 1.0);
        hj *= h;
    }
    (h * left, h * right)
}

/// `∫_a^{a+h} r^n dr` as a positive sum.
fn cell_moment(a: f64, h: f64, n: u32) -> f64 {
    let mut s = 0.0;
    let mut binom = 1.0;
    let mut hj = 1.0;
    for j in 0..=n {
        let jf = j as f64;
        s += binom * a.powi((n - j) as i32) * hj / (jf + 1.0);
        binom = binom * (n - j) as f64 / (jf + 1.0);
        hj *= h;
    }
    h * s
}

/// Nodes `r_0 < … < r_M` on `[r_min, r_max]` with quadrature against `ω_{N-1} r^{N-1} dr`.
///
/// The quadrature weight of node `i` is `ω_{N-1} ∫ φ_i(r) r^{N-1} dr` where `φ_i` is the
/// piecewise-linear hat function of the node. This is the trapezoidal rule with the
/// radial Jacobian integrated exactly on each cell, so shell volumes and integrals of
/// `(degree ≤ 1) · r^{N-1}` are exact up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMesh {
    nodes: Vec<f64>,
    dim: u32,
    grading: Grading,
    quad_weights: Vec<f64>,
    // Hat moments without the sphere factor, and cell stiffness factors ∫_cell r^{N-1} / h^2.
    masses: Vec<f64>,
    conductances: Vec<f64>,
}

pub fn make_radial_mesh(
    r_min: f64,
    r_max: f64,
    intervals: usize,
    grading: Grading,
    dim: u32,
) -> Result<RadialMesh> {
    RadialMesh::new(r_min, r_max, intervals, grading, dim)
}

impl RadialMesh {
    /// Mesh with `intervals + 1` nodes; requires `0 < r_min < r_max`, `intervals >= 16`, `dim >= 1`.
    pub fn new(r_min: f64, r_max: f64, intervals: usize, grading: Grading, dim: u32) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_min < r_max) {
            return Err(Error::Domain(format!(
                "mesh bounds must satisfy 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if intervals < 16 {
            return Err(Error::Domain(format!(
                "mesh needs at least 16 intervals, got {intervals}"
            )));
        }
        if dim == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        let m = intervals as f64;
        let mut nodes: Vec<f64> = match grading {
            Grading::Uniform => {
                let h = (r_max - r_min) / m;
                (0..=intervals).map(|i| r_min + h * i as f64).collect()
            }
            Grading::LogGraded => {
                let (l0, l1) = (r_min.ln(), r_max.ln());
                let ds = (l1 - l0) / m;
                (0..=intervals).map(|i| (l0 + ds * i as f64).exp()).collect()
            }
        };
        nodes[0] = r_min;
        nodes[intervals] = r_max;
        Ok(Self::from_nodes_unchecked(nodes, dim, grading))
    }

    fn from_nodes_unchecked(nodes: Vec<f64>, dim: u32, grading: Grading) -> Self {
        let n = dim - 1;
        let omega = sphere_area(dim);
        let mut masses = vec![0.0; nodes.len()];
        let mut conductances = Vec::with_capacity(nodes.len() - 1);
        for (i, w) in nodes.windows(2).enumerate() {
            let h = w[1] - w[0];
            let (left, right) = cell_hat_moments(w[0], h, n);
            masses[i] += left;
            masses[i + 1] += right;
            conductances.push(cell_moment(w[0], h, n) / (h * h));
        }
        let quad_weights = masses.iter().map(|m| omega * m).collect();
        Self {
            nodes,
            dim,
            grading,
            quad_weights,
            masses,
            conductances,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    /// Number of intervals `M`; there are `M + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// The same bounds, grading and dimension with `intervals` intervals.
    pub fn with_intervals(&self, intervals: usize) -> Result<Self> {
        Self::new(self.r_min(), self.r_max(), intervals, self.grading, self.dim)
    }

    /// Quadrature of nodal values `f_i` against `ω_{N-1} r^{N-1} dr`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        self.quad_weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Quadrature of `f(r_i)`.
    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.quad_weights).map(|(&r, w)| w * f(r)).sum()
    }

    /// `(Σ_i w_i r_i^σ |u_i|^p)^{1/p}`, the discrete `‖ |x|^{σ/p} u ‖_p`.
    pub fn weighted_lp_norm(&self, values: &[f64], sigma: f64, p: f64) -> f64 {
        assert_eq!(values.len(), self.len());
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.quad_weights)
            .zip(values)
            .map(|((&r, w), u)| {
                let weight = if sigma == 0.0 { 1.0 } else { r.powf(sigma) };
                w * weight * u.abs().powf(p)
            })
            .sum();
        s.powf(1.0 / p)
    }

    /// Conservative radial Laplacian `r^{1-N} (r^{N-1} u')'`.
    ///
    /// Interior rows are the lumped piecewise-linear finite element stencil
    /// `(κ_i (u_{i+1} - u_i) - κ_{i-1} (u_i - u_{i-1})) / m_i`, with `κ` the cell moments of
    /// `r^{N-1}` divided by `h^2` and `m_i` the hat moments. It vanishes exactly on
    /// constants and `diag(w) Δ_h` is symmetric. End rows use one-sided four-point
    /// differences of `u'' + (N-1) u'/r`.
    pub fn radial_laplacian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(u.len(), n);
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            out[i] = (self.conductances[i] * (u[i + 1] - u[i])
                - self.conductances[i - 1] * (u[i] - u[i - 1]))
                / self.masses[i];
        }
        let nm1 = self.dim as f64 - 1.0;
        for (i, idx) in [(0usize, [0usize, 1, 2, 3]), (n - 1, [n - 1, n - 2, n - 3, n - 4])] {
            let xs: Vec<f64> = idx.iter().map(|&j| self.nodes[j]).collect();
            let w = fornberg_weights(self.nodes[i], &xs, 2);
            let d1: f64 = idx.iter().zip(&w[1]).map(|(&j, c)| c * u[j]).sum();
            let d2: f64 = idx.iter().zip(&w[2]).map(|(&j, c)| c * u[j]).sum();
            out[i] = d2 + nm1 * d1 / self.nodes[i];
        }
        out
    }

    /// Interior-row coefficients `(lower, diag, upper)` of [`Self::radial_laplacian`].
    pub fn laplacian_row(&self, i: usize) -> (f64, f64, f64) {
        assert!(i > 0 && i + 1 < self.len());
        let m = self.masses[i];
        let (kl, kr) = (self.conductances[i - 1], self.conductances[i]);
        (kl / m, -(kl + kr) / m, kr / m)
    }

    /// Centered three-point weights of `d/dr` at interior node `i`.
    pub fn derivative_row(&self, i: usize) -> (f64, f64, f64) {
        assert!(i > 0 && i + 1 < self.len());
        let (hl, hr) = (self.nodes[i] - self.nodes[i - 1], self.nodes[i + 1] - self.nodes[i]);
        (
            -hr / (hl * (hl + hr)),
            (hr - hl) / (hl * hr),
            hl / (hr * (hl + hr)),
        )
    }

    /// First derivative: centered three-point at interior nodes, one-sided three-point at the ends.
    pub fn radial_derivative(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(u.len(), n);
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            let (a, b, c) = self.derivative_row(i);
            out[i] = a * u[i - 1] + b * u[i] + c * u[i + 1];
        }
        for (i, idx) in [(0usize, [0usize, 1, 2]), (n - 1, [n - 1, n - 2, n - 3])] {
            let xs: Vec<f64> = idx.iter().map(|&j| self.nodes[j]).collect();
            let w = fornberg_weights(self.nodes[i], &xs, 1);
            out[i] = idx.iter().zip(&w[1]).map(|(&j, c)| c * u[j]).sum();
        }
        out
    }
}

/// Nodal values of a radial function on a shared mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub mesh: Arc<RadialMesh>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: Arc<RadialMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::Domain(format!(
                "expected {} nodal values, got {}",
                mesh.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at node {i}")));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<RadialMesh>) -> Self {
        let values = vec![0.0; mesh.len()];
        Self { mesh, values }
    }

    pub fn from_fn(mesh: Arc<RadialMesh>, f: impl Fn(f64) -> f64) -> Self {
        let values = mesh.nodes().iter().map(|&r| f(r)).collect();
        Self { mesh, values }
    }

    pub fn weighted_lp_norm(&self, sigma: f64, p: f64) -> f64 {
        self.mesh.weighted_lp_norm(&self.values, sigma, p)
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.weighted_lp_norm(0.0, p)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn radial_laplacian(&self) -> Self {
        Self {
            mesh: self.mesh.clone(),
            values: self.mesh.radial_laplacian(&self.values),
        }
    }

    pub fn radial_derivative(&self) -> Self {
        Self {
            mesh: self.mesh.clone(),
            values: self.mesh.radial_derivative(&self.values),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|v| s * v).collect(),
        }
    }

    /// CSV with header `r,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (r, v) in self.mesh.nodes().iter().zip(&self.values) {
            let _ = writeln!(s, "{r:e},{v:e}");
        }
        s
    }
}
