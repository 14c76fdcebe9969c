//! Numerical laboratory for the degenerate elliptic operator
//!
//! ```text
//! A_{b,c} = (1 + |x|^α) Δ + b |x|^{α-2} x·∇ - c |x|^{α-2} - |x|^β      on R^N \ {0}
//! ```
//!
//! restricted to radial functions. The crate is organised as
//!
//! * [`conditions`]: exact parameter algebra (thresholds, the constants `k1..k4`,
//!   adjoint coefficients, shift bounds) and regime classification;
//! * [`grid`]: radial meshes, quadrature against `ω_{N-1} r^{N-1} dr`, weighted norms,
//!   finite differences and a seeded corpus of compactly supported test functions;
//! * [`form`]: the bilinear form associated with `-A_{b,c} + λ`, its lower estimates
//!   and the cutoff-core experiment;
//! * [`semigroup`]: the tridiagonal generator, implicit time stepping and the
//!   contraction/positivity/approximation checks on trajectories;
//! * [`inequalities`]: weighted Hardy, Yosida-regularised perturbation estimates,
//!   the drift-removing conjugation and a-priori domain estimates.
//!
//! Everything acts on the radial subspace of a truncated shell `r_min <= r <= r_max`.
//! The checks are necessary-condition verifications of statements about the
//! infinite-dimensional operator, not proofs.

pub mod banded;
pub mod conditions;
pub mod error;
pub mod form;
pub mod grid;
pub mod inequalities;
pub mod report;
pub mod semigroup;

pub use conditions::{GenerationVerdict, KConstants, LpContext, OperatorParams, Regime};
pub use error::{Error, Result};
pub use grid::{GridFunction, Grading, RadialFunction, RadialMesh, SmoothRadialFunction, TestFunction};
pub use report::InequalityReport;
