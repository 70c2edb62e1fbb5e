//! Weighted Euler characteristics and the identities tying them to the
//! growth series and to the estimated L²-Betti numbers.

mod checks;
mod euler;

pub use checks::{
    cell_tolerance, cone_check, duality_check, euler_additivity, euler_consistency,
    euler_growth_identity, kunneth_check, mayer_vietoris_check, trace_euler_identity,
    widen_by_disagreement, CheckContext, CheckStatus, IdentityCheck, Side, BASE_TOLERANCE,
};
pub use euler::{dual_euler, weighted_euler, weighted_euler_on, weighted_euler_uniform};
