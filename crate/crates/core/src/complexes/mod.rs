//! Finite simplicial complexes: construction, links, joins, barycentric
//! subdivision with its dimension grading, the even part and odd-vertex
//! removal chains, exact rational homology, and homology-sphere checks.

mod complex;
mod homology;
mod io;
mod ops;
mod symmetry;

pub use complex::{Complex, Face, FaceIndex};
pub use homology::{
    is_ghs, rational_homology, rational_rank, reduced_euler, sphere_betti, GhsCertificate,
};
pub use io::{from_json, read_complex, to_json, write_complex, ComplexFile};
pub use ops::{
    barycenter_name, barycentric_subdivision, boundary_simplex, cycle, even_subcomplex,
    in_removal_family, is_subdivided_simplex_boundary, join, link_split_check, odd_removal_chain,
    simplex, LinkSplit, RemovalChain, RemovalStep, Tiebreak,
};
pub use symmetry::{check_ground_action, sym_action_check, TransitivityReport, SYM_ACTION_MAX_K};

/// `b∂Δ^n`.
pub fn subdivided_boundary(n: usize) -> crate::error::Result<Complex> {
    Ok(barycentric_subdivision(&boundary_simplex(n)?))
}
