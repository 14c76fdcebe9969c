//! Verifiers for the weighted inequalities, the perturbation estimate and the drift-removing transform.

mod apriori;
mod duality;
mod hardy;
mod okazawa;
mod transform;

pub use apriori::{apriori_ratios, drift_perturbation_check, interp_weight_search, AprioriRatios, DriftPerturbation};
pub use duality::{duality_map, duality_pairing};
pub use hardy::{hardy_weighted, hardy_weighted_with_floor, ZERO_FLOOR};
pub use okazawa::{
    a1_search, a1_search_windowed, okazawa_estimate_check, okazawa_estimate_evaluate, okazawa_pairing_nonnegative,
    posterior_grid, q_function, A1Outcome, QFunctionSpec, YosidaPotential,
};
pub use transform::{conjugation_residual, phi_transform, u_potential};
