//! Right-angled Coxeter groups: normal forms, balls, coset
//! representatives, weights and growth series.
//!
//! Normal forms are the lexicographically least reduced words under
//! commutation of adjacent commuting letters, computed by repeatedly taking
//! the smallest letter that can be moved to the front.

mod ball;
mod growth;
mod system;
mod weights;

pub use ball::{Ball, BallShells, DEFAULT_MAX_ELEMENTS};
pub use growth::{
    growth_at, growth_series, inverse_growth_at, spherical_counts, Poly, RationalFunction,
    RationalFunctionJson,
};
pub use system::{members, CoxeterSystem, Element, GenSet, Side};
pub use weights::{weight, WeightAssignment};
