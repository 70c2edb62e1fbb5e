use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::complex::{Complex, Face};
use super::ops::{barycentric_subdivision, boundary_simplex, even_subcomplex, next_permutation};
use crate::error::{Error, Result};

/// Outcome of [`sym_action_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub k: usize,
    /// Size of the permuted ground set (`2k + 1`).
    pub ground: usize,
    pub permutations_checked: usize,
    /// Every permutation acts by a grading-preserving simplicial automorphism.
    pub automorphisms: bool,
    /// Dimension of the even part (`k − 1`).
    pub even_dim: isize,
    pub top_simplices: usize,
    pub orbit_size: usize,
    pub transitive: bool,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.automorphisms && self.transitive && self.even_dim == self.k as isize - 1
    }
}

/// Default budget for [`sym_action_check`].
pub const SYM_ACTION_MAX_K: usize = 3;

/// Builds `b∂Δ^{2k}`, lets `Sym(2k+1)` permute the ground set, and checks
/// that the action is by graded automorphisms and is transitive on the
/// top-dimensional simplices of the even part.
pub fn sym_action_check(k: usize, max_k: usize) -> Result<TransitivityReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if k > max_k {
        return Err(Error::Budget {
            what: format!("sym_action_check k={k} above budget"),
            reached: max_k,
        });
    }
    let bc = barycentric_subdivision(&boundary_simplex(2 * k)?);
    let mut report = check_ground_action(&bc)?;
    report.k = k;
    Ok(report)
}

/// Carrier of each vertex of a graded subdivision: the atoms (grading-0
/// vertices) it is adjacent to, or itself for an atom. Atoms are numbered in
/// vertex order.
fn carriers(bc: &Complex) -> Result<(usize, Vec<Face>)> {
    let g = bc.grading().ok_or(Error::MissingGrading)?;
    let atoms: Vec<usize> = (0..bc.vertex_count()).filter(|&u| g[u] == 0).collect();
    let label: HashMap<usize, usize> = atoms.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let adj = bc.neighbors();
    let sets = (0..bc.vertex_count())
        .map(|u| {
            if g[u] == 0 {
                vec![label[&u]]
            } else {
                let mut s: Face = adj[u]
                    .iter()
                    .filter_map(|w| label.get(w).copied())
                    .collect();
                s.sort_unstable();
                s
            }
        })
        .collect();
    Ok((atoms.len(), sets))
}

/// Runs the full symmetric group on the atoms of a graded subdivision.
pub fn check_ground_action(bc: &Complex) -> Result<TransitivityReport> {
    let g = bc.grading().ok_or(Error::MissingGrading)?;
    let (ground, carrier) = carriers(bc)?;
    let by_carrier: HashMap<&Face, usize> =
        carrier.iter().enumerate().map(|(u, s)| (s, u)).collect();
    let facets: BTreeSet<Face> = bc.facets().iter().cloned().collect();
    let even = even_subcomplex(bc)?;
    let even_dim = even.dim();
    let top: BTreeSet<BTreeSet<String>> = even
        .facets()
        .iter()
        .filter(|f| f.len() as isize == even_dim + 1)
        .map(|f| f.iter().map(|&v| even.name(v).to_string()).collect())
        .collect();
    let seed: Option<Vec<usize>> = top
        .iter()
        .next()
        .map(|f| f.iter().map(|n| bc.vertex(n).unwrap()).collect());

    let mut perm: Vec<usize> = (0..ground).collect();
    let mut checked = 0usize;
    let mut automorphisms = true;
    let mut orbit: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    loop {
        checked += 1;
        let image: Option<Vec<usize>> = carrier
            .iter()
            .map(|s| {
                let mut t: Face = s.iter().map(|&a| perm[a]).collect();
                t.sort_unstable();
                by_carrier.get(&t).copied()
            })
            .collect();
        match image {
            Some(map) => {
                let graded = (0..bc.vertex_count()).all(|u| g[map[u]] == g[u]);
                let simplicial = facets.iter().all(|f| {
                    let mut h: Face = f.iter().map(|&u| map[u]).collect();
                    h.sort_unstable();
                    facets.contains(&h)
                });
                automorphisms &= graded && simplicial;
                if let Some(seed) = &seed {
                    orbit.insert(seed.iter().map(|&u| bc.name(map[u]).to_string()).collect());
                }
            }
            None => automorphisms = false,
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let transitive = !top.is_empty() && orbit == top;
    Ok(TransitivityReport {
        k: 0,
        ground,
        permutations_checked: checked,
        automorphisms,
        even_dim,
        top_simplices: top.len(),
        orbit_size: orbit.len(),
        transitive,
    })
}
