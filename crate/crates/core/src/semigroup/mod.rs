//! Discrete generator, implicit time stepping and semigroup property checks.
//!
//! All checks act on radial data on a truncated shell with Dirichlet conditions at both
//! radii; they are necessary-condition checks of statements about the full operator.

mod checks;
mod evolve;
mod operator;

pub use checks::{
    adjoint_consistency, check_positivity_submarkov, check_quasi_contractivity, discrete_dissipativity,
    numerical_range_report, pairing_defect, truncated_potential, truncated_potential_experiment, AdjointStudy,
    NumericalRangeSummary, TruncationExperiment,
};
pub use evolve::{evolve, implicit_euler_evolve, Scheme, Trajectory};
pub use operator::{assemble_generator, DiscreteOperator, MMatrixCertificate, Potential};
