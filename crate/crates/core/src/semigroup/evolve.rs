use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::operator::DiscreteOperator;
use crate::banded::Tridiagonal;
use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    ImplicitEuler,
    /// Second order but not positivity preserving; excluded from positivity assertions.
    CrankNicolson,
}

/// Time levels of an evolution of the shifted generator `A_h - λ`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridFunction>,
    pub lambda: f64,
    pub scheme: Scheme,
    pub p_list: Vec<f64>,
    /// `norms[j][k]` is `‖u^k‖_{p_j}`.
    pub norms: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Factor `e^{λ t}` turning the shifted solution at `t` into an approximation of `e^{tA} u_0`.
    pub fn unshift_factor(&self, t: f64) -> f64 {
        (self.lambda * t).exp()
    }

    pub fn final_state(&self) -> &GridFunction {
        self.states.last().expect("trajectory is never empty")
    }

    /// CSV with header `t,node,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,node,value\n");
        for (t, st) in self.times.iter().zip(&self.states) {
            for (i, v) in st.values.iter().enumerate() {
                let _ = writeln!(s, "{t:e},{i},{v:e}");
            }
        }
        s
    }

    /// `‖u^k‖_p` for every level.
    pub fn norm_sequence(&self, p: f64) -> Vec<f64> {
        match self.p_list.iter().position(|&q| q == p) {
            Some(j) => self.norms[j].clone(),
            None => self.states.iter().map(|s| s.lp_norm(p)).collect(),
        }
    }
}

/// Implicit Euler: `(I - dt A_h) u^{k+1} = u^k`.
pub fn implicit_euler_evolve(
    op: &DiscreteOperator,
    u0: &GridFunction,
    dt: f64,
    steps: usize,
    p_list: &[f64],
) -> Result<Trajectory> {
    evolve(op, u0, dt, steps, p_list, Scheme::ImplicitEuler)
}

pub fn evolve(
    op: &DiscreteOperator,
    u0: &GridFunction,
    dt: f64,
    steps: usize,
    p_list: &[f64],
    scheme: Scheme,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::Domain("at least one step is required".into()));
    }
    if u0.values.len() != op.mesh.len() {
        return Err(Error::Domain("initial datum lives on a different mesh".into()));
    }
    let theta = match scheme {
        Scheme::ImplicitEuler => 1.0,
        Scheme::CrankNicolson => 0.5,
    };
    let lhs = op.matrix.shifted_identity(theta * dt);
    let lu = lhs.factorize().map_err(|e| {
        let cert = op.certificate();
        Error::Numerical(format!(
            "{e}; dt = {dt}, M-matrix certificate: off-diagonals nonnegative = {}, max dt = {:e}",
            cert.offdiag_nonnegative, cert.max_dt
        ))
    })?;
    let explicit: Option<Tridiagonal> = (theta < 1.0).then(|| op.matrix.shifted_identity(-(1.0 - theta) * dt));
    let n = op.mesh.len();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(u0.clone());
    let mut interior: Vec<f64> = u0.values[1..n - 1].to_vec();
    for k in 1..=steps {
        if let Some(ex) = &explicit {
            interior = ex.matvec(&interior);
        }
        lu.solve_in_place(&mut interior);
        let mut values = Vec::with_capacity(n);
        values.push(0.0);
        values.extend_from_slice(&interior);
        values.push(0.0);
        times.push(k as f64 * dt);
        states.push(GridFunction {
            mesh: op.mesh.clone(),
            values,
        });
    }
    let norms = p_list
        .iter()
        .map(|&p| states.iter().map(|s| s.lp_norm(p)).collect())
        .collect();
    Ok(Trajectory {
        times,
        states,
        lambda: op.lambda,
        scheme,
        p_list: p_list.to_vec(),
        norms,
    })
}
