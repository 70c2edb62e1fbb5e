//! Truncated Davis complexes: cube catalogs over a ball, weighted cochain
//! complexes with boundary conditions and restrictions, and their
//! symmetrized Hodge Laplacians.
//!
//! Cubes are cosets `wW_T` with `w` the shortest element and `T` spherical.
//! The truncation of radius `R` keeps the cubes whose vertices all lie in
//! the ball, i.e. `|w| + |T| ≤ R`.

mod catalog;
mod dump;
mod laplacian;
mod sparse;
mod weighted;

pub use catalog::{CatalogSummary, Cube, CubeCatalog, LinkCheck, DEFAULT_MAX_CELLS};
pub use dump::{read_weighted_complex, write_weighted_complex};
pub use laplacian::{Laplacian, SymmetricOperator};
pub use sparse::Csr;
pub use weighted::{
    exact_chamber_dimension, exact_gram, full_mask, BoundaryCondition, IdentityCell, Restriction,
    WeightedComplex,
};
