//! Weighted L²-Betti number estimates from truncated Laplacians.
//!
//! The von Neumann trace is localized at the identity chamber: for degree
//! `i` the estimate is `Σ_{|T|=i} Π q_v/(1+q_v) · ⟨P_{[0,ε]} e_T, e_T⟩`,
//! evaluated on a grid of thresholds `ε`.

mod estimate;
mod lanczos;
mod sweep;

pub use estimate::{
    default_eps_grid, estimate_all, relative_estimate, select_plateau, subcomplex_estimate,
    vn_betti_estimate, BettiEstimate, EstimatorOptions, Plateau, Truncation,
};
pub use lanczos::{dense_eigen, lanczos_quadrature, Quadrature};
pub use sweep::{attach_checks, attach_kunneth, sweep, SweepCell, SweepGrid, SweepReport};
