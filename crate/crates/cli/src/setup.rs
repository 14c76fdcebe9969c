//! Per-point construction of parameters, meshes and shifts.

use std::sync::Arc;

use semilab_core::conditions::lambda_min;
use semilab_core::{OperatorParams, RadialMesh};

use crate::config::{GridPoint, RunConfig};

pub fn params(point: &GridPoint) -> semilab_core::Result<OperatorParams> {
    OperatorParams::new(point.dim, point.alpha, point.beta, point.b, point.c)
}

pub fn mesh(cfg: &RunConfig, dim: u32) -> semilab_core::Result<Arc<RadialMesh>> {
    let m = &cfg.mesh;
    RadialMesh::new(m.r_min, m.r_max, m.intervals, m.grading, dim).map(Arc::new)
}

/// `(λ_min, λ)`, where `λ` is the configured shift or `λ_min + lambda_margin`.
pub fn shift(cfg: &RunConfig, params: &OperatorParams) -> semilab_core::Result<(f64, f64)> {
    let lm = lambda_min(params)?;
    Ok((lm, cfg.lambda.unwrap_or(lm + cfg.lambda_margin)))
}
