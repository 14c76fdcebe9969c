use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// `F_p(u) = |u|^{p-2} u ‖u‖_p^{2-p}` in the weighted `L^p` of the mesh; zero for `u = 0`.
pub fn duality_map(u: &GridFunction, p: f64) -> Result<GridFunction> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::Domain(format!("duality map needs p > 1, got {p}")));
    }
    let norm = u.lp_norm(p);
    if norm == 0.0 {
        return Ok(u.scaled(0.0));
    }
    let scale = norm.powf(2.0 - p);
    let values = u
        .values
        .iter()
        .map(|&v| if v == 0.0 { 0.0 } else { v.signum() * v.abs().powf(p - 1.0) * scale })
        .collect();
    Ok(GridFunction {
        mesh: u.mesh.clone(),
        values,
    })
}

/// Weighted pairing `⟨u, f⟩ = Σ_i w_i u_i f_i`.
pub fn duality_pairing(u: &GridFunction, f: &GridFunction) -> f64 {
    u.mesh
        .quad_weights()
        .iter()
        .zip(&u.values)
        .zip(&f.values)
        .map(|((w, a), b)| w * a * b)
        .sum()
}
