use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::complex::{Complex, Face};
use crate::error::{Error, Result};

/// Boundary of the standard `n`-simplex on vertices `"0"..="n"`.
pub fn boundary_simplex(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::Precondition(
            "boundary of the 0-simplex is empty".into(),
        ));
    }
    let names = (0..=n).map(|i| i.to_string()).collect();
    let facets = (0..=n)
        .map(|skip| (0..=n).filter(|&v| v != skip).collect())
        .collect();
    Complex::new(names, facets, None)
}

/// The full simplex on `n + 1` vertices.
pub fn simplex(n: usize) -> Complex {
    let names = (0..=n).map(|i| i.to_string()).collect();
    Complex::new(names, vec![(0..=n).collect()], None).expect("simplex")
}

/// The cycle graph on `n ≥ 3` vertices.
pub fn cycle(n: usize) -> Result<Complex> {
    if n < 3 {
        return Err(Error::Precondition(
            "a cycle needs at least 3 vertices".into(),
        ));
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    let facets = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Complex::new(names, facets, None)
}

/// Simplicial join. Vertex names are kept when the operands are disjoint;
/// otherwise they are prefixed with `a.` and `b.`.
///
/// The result is graded only when both operands are graded and the union
/// grading still separates the vertices of every facet.
pub fn join(a: &Complex, b: &Complex) -> Complex {
    let clash = a.names().iter().any(|n| b.vertex(n).is_ok());
    let (an, bn): (Vec<String>, Vec<String>) = if clash {
        (
            a.names().iter().map(|n| format!("a.{n}")).collect(),
            b.names().iter().map(|n| format!("b.{n}")).collect(),
        )
    } else {
        (a.names().to_vec(), b.names().to_vec())
    };
    let off = an.len();
    let names: Vec<String> = an.into_iter().chain(bn).collect();
    if names.is_empty() {
        return Complex::empty();
    }
    let mut facets = Vec::with_capacity(a.facets().len() * b.facets().len());
    for f in a.facets() {
        for g in b.facets() {
            let mut h = f.clone();
            h.extend(g.iter().map(|v| v + off));
            facets.push(h);
        }
    }
    let grading = match (a.grading(), b.grading()) {
        (Some(ga), Some(gb)) => Some(ga.iter().chain(gb).copied().collect::<Vec<u32>>()),
        _ => None,
    };
    Complex::new(names.clone(), facets.clone(), grading)
        .or_else(|_| Complex::new(names, facets, None))
        .expect("join of valid complexes")
}

/// Canonical name of a barycenter: the underlying face in vertex order.
pub fn barycenter_name(c: &Complex, face: &[usize]) -> String {
    let parts: Vec<&str> = face.iter().map(|&v| c.name(v)).collect();
    format!("{{{}}}", parts.join(","))
}

/// Barycentric subdivision: vertices are the nonempty faces, simplices are
/// chains under inclusion, and each vertex is graded by the dimension of its
/// face.
pub fn barycentric_subdivision(c: &Complex) -> Complex {
    if c.is_empty() {
        return Complex::empty();
    }
    let idx = c.face_index();
    let mut names = Vec::new();
    let mut grading = Vec::new();
    let mut id: HashMap<Face, usize> = HashMap::new();
    for k in 0..=c.dim() as usize {
        for f in idx.faces(k) {
            id.insert(f.clone(), names.len());
            names.push(barycenter_name(c, f));
            grading.push(k as u32);
        }
    }
    let mut facets = Vec::new();
    for f in c.facets() {
        for perm in permutations(f) {
            let mut chain = Vec::with_capacity(perm.len());
            let mut prefix: Face = Vec::with_capacity(perm.len());
            for v in perm {
                prefix.push(v);
                let mut s = prefix.clone();
                s.sort_unstable();
                chain.push(id[&s]);
            }
            facets.push(chain);
        }
    }
    Complex::new(names, facets, Some(grading)).expect("barycentric subdivision is valid")
}

/// All orderings of a small slice, in lexicographic order of positions.
pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..items.len()).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        if !next_permutation(&mut idx) {
            return out;
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn require_grading(c: &Complex) -> Result<&[u32]> {
    c.grading().ok_or(Error::MissingGrading)
}

/// Full subcomplex on the even-graded vertices.
pub fn even_subcomplex(bc: &Complex) -> Result<Complex> {
    let g = require_grading(bc)?;
    let keep: Vec<usize> = (0..bc.vertex_count()).filter(|&v| g[v] % 2 == 0).collect();
    Ok(bc.full_subcomplex(&keep))
}

/// One deletion in a [`RemovalChain`].
#[derive(Clone, Debug)]
pub struct RemovalStep {
    pub removed: String,
    pub grading: u32,
    pub complex: Complex,
}

/// A recorded sequence of highest-odd-vertex deletions from a graded
/// complex down to its even part.
#[derive(Clone, Debug)]
pub struct RemovalChain {
    pub start: Complex,
    pub steps: Vec<RemovalStep>,
    pub end: Complex,
}

/// Vertex order used to break ties between vertices of equal grading.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Tiebreak {
    /// Smallest canonical name first.
    #[default]
    Lexicographic,
    /// Largest canonical name first.
    ReverseLexicographic,
}

/// Repeatedly deletes an odd-graded vertex of maximal grading until only
/// even-graded vertices remain.
pub fn odd_removal_chain(bc: &Complex, tiebreak: Tiebreak) -> Result<RemovalChain> {
    require_grading(bc)?;
    let mut current = bc.clone();
    let mut steps = Vec::new();
    loop {
        let g = current.grading().unwrap();
        let top = (0..current.vertex_count())
            .filter(|&v| g[v] % 2 == 1)
            .map(|v| g[v])
            .max();
        let Some(top) = top else { break };
        let mut candidates: Vec<usize> = (0..current.vertex_count())
            .filter(|&v| g[v] == top)
            .collect();
        candidates.sort_by(|&a, &b| current.name(a).cmp(current.name(b)));
        let v = match tiebreak {
            Tiebreak::Lexicographic => candidates[0],
            Tiebreak::ReverseLexicographic => *candidates.last().unwrap(),
        };
        let removed = current.name(v).to_string();
        current = current.remove_vertices(&[v]);
        steps.push(RemovalStep {
            removed,
            grading: top,
            complex: current.clone(),
        });
    }
    Ok(RemovalChain {
        start: bc.clone(),
        steps,
        end: current,
    })
}

/// Whether `a` belongs to the family of full subcomplexes of `bc` that
/// contain the even part and, whenever they contain a vertex of odd grading
/// `2j+1`, contain every vertex of `bc` of grading at most `2j`.
pub fn in_removal_family(bc: &Complex, a: &Complex) -> Result<bool> {
    let g = require_grading(bc)?;
    let mut members = Vec::with_capacity(a.vertex_count());
    for name in a.names() {
        match bc.vertex(name) {
            Ok(v) => members.push(v),
            Err(_) => return Ok(false),
        }
    }
    if bc.full_subcomplex(&members) != *a {
        return Ok(false);
    }
    let present: BTreeSet<usize> = members.iter().copied().collect();
    let evens_in = (0..bc.vertex_count())
        .filter(|&v| g[v] % 2 == 0)
        .all(|v| present.contains(&v));
    if !evens_in {
        return Ok(false);
    }
    let max_odd = present
        .iter()
        .filter(|&&v| g[v] % 2 == 1)
        .map(|&v| g[v])
        .max();
    Ok(match max_odd {
        None => true,
        Some(m) => (0..bc.vertex_count())
            .filter(|&v| g[v] < m)
            .all(|v| present.contains(&v)),
    })
}

/// Result of splitting the link of a highest odd vertex.
#[derive(Clone, Debug)]
pub struct LinkSplit {
    /// `grading(v) = 2d − 1`.
    pub d: u32,
    /// The factor below `v`, checked isomorphic to the subdivided boundary
    /// of a `(2d−1)`-simplex.
    pub lower: Complex,
    /// The factor above `v`, regraded by subtracting `2d`.
    pub upper: Complex,
    pub verified: bool,
}

/// Splits `link(a, v)` into the subdivided boundary of the face carried by
/// `v` joined with the part of the link lying above `v`.
///
/// Neighbors of `v` in a graded flag complex are comparable to it, so the
/// split is read off the grading: lower vertices have smaller grading, upper
/// ones larger. The lower factor is matched against a freshly built
/// subdivided simplex boundary through its atoms (grading-0 vertices), and the
/// link's facets are compared with the products of factor facets.
pub fn link_split_check(a: &Complex, v: &str) -> Result<LinkSplit> {
    let g = require_grading(a)?;
    let vi = a.vertex(v)?;
    let gv = g[vi];
    if gv % 2 == 0 {
        return Err(Error::Precondition(format!(
            "vertex `{v}` has even grading {gv}"
        )));
    }
    let d = gv.div_ceil(2);
    let highest = (0..a.vertex_count())
        .filter(|&u| g[u] % 2 == 1)
        .all(|u| g[u] <= gv);
    let link = a.link(&[vi])?;
    let lg = link.grading().unwrap();
    let lower_v: Vec<usize> = (0..link.vertex_count()).filter(|&u| lg[u] < gv).collect();
    let upper_v: Vec<usize> = (0..link.vertex_count()).filter(|&u| lg[u] > gv).collect();
    let lower = link.full_subcomplex(&lower_v);
    let upper_raw = link.full_subcomplex(&upper_v);
    let shift = 2 * d;
    let upper = match upper_raw.grading() {
        Some(ug) if ug.iter().all(|&x| x >= shift) => {
            upper_raw.with_grading(Some(ug.iter().map(|x| x - shift).collect()))?
        }
        Some(_) => upper_raw.clone(),
        None => upper_raw.clone(),
    };
    let lower_ok = is_subdivided_simplex_boundary(&lower, (2 * d - 1) as usize);
    let product: BTreeSet<BTreeSet<String>> = lower
        .named_facets()
        .iter()
        .flat_map(|f| {
            upper_raw
                .named_facets()
                .into_iter()
                .map(move |h| f.iter().cloned().chain(h).collect())
        })
        .collect();
    let join_ok = product == link.named_facets();
    Ok(LinkSplit {
        d,
        lower,
        upper,
        verified: highest && lower_ok && join_ok,
    })
}

/// Checks that a graded complex is isomorphic, as a graded complex, to the
/// barycentric subdivision of the boundary of an `m`-simplex.
///
/// The atoms (grading 0) play the role of simplex vertices; every other
/// vertex is identified with the set of atoms adjacent to it, and the induced
/// map onto `b∂Δ^m` must be a grading-preserving bijection on vertices that
/// carries facets onto facets.
pub fn is_subdivided_simplex_boundary(c: &Complex, m: usize) -> bool {
    let Some(g) = c.grading() else { return false };
    let atoms: Vec<usize> = (0..c.vertex_count()).filter(|&u| g[u] == 0).collect();
    if atoms.len() != m + 1 {
        return false;
    }
    let atom_label: HashMap<usize, usize> =
        atoms.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let adj = c.neighbors();
    let mut carrier: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for u in 0..c.vertex_count() {
        let set: Vec<usize> = if g[u] == 0 {
            vec![atom_label[&u]]
        } else {
            let mut s: Vec<usize> = adj[u]
                .iter()
                .filter_map(|w| atom_label.get(w).copied())
                .collect();
            s.sort_unstable();
            s
        };
        if set.len() != g[u] as usize + 1 || carrier.insert(set, u).is_some() {
            return false;
        }
    }
    let Ok(reference) = boundary_simplex(m) else {
        return false;
    };
    let reference = barycentric_subdivision(&reference);
    if reference.vertex_count() != c.vertex_count() {
        return false;
    }
    let rg = reference.grading().unwrap();
    let ratoms: HashMap<usize, usize> = (0..reference.vertex_count())
        .filter(|&u| rg[u] == 0)
        .enumerate()
        .map(|(i, u)| (u, i))
        .collect();
    let radj = reference.neighbors();
    let mut map = vec![usize::MAX; reference.vertex_count()];
    for u in 0..reference.vertex_count() {
        let set: Vec<usize> = if rg[u] == 0 {
            vec![ratoms[&u]]
        } else {
            let mut s: Vec<usize> = radj[u]
                .iter()
                .filter_map(|w| ratoms.get(w).copied())
                .collect();
            s.sort_unstable();
            s
        };
        match carrier.get(&set) {
            Some(&x) => map[u] = x,
            None => return false,
        }
    }
    let mapped: BTreeSet<Vec<usize>> = reference
        .facets()
        .iter()
        .map(|f| {
            let mut h: Vec<usize> = f.iter().map(|&u| map[u]).collect();
            h.sort_unstable();
            h
        })
        .collect();
    let own: BTreeSet<Vec<usize>> = c.facets().iter().cloned().collect();
    mapped == own
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_simplex_shapes() {
        assert!(boundary_simplex(0).is_err());
        let b1 = boundary_simplex(1).unwrap();
        assert_eq!(b1.f_vector(), vec![2]);
        assert_eq!(boundary_simplex(2).unwrap().f_vector(), vec![3, 3]);
        assert_eq!(boundary_simplex(3).unwrap().f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn join_examples() {
        let two = boundary_simplex(1).unwrap();
        let square = join(&two, &two);
        assert_eq!(square.f_vector(), vec![4, 4]);
        assert_eq!(square.named_facets().len(), 4);
        let e = Complex::empty();
        assert_eq!(join(&e, &square), square);
        let oct = join(&two, &square);
        assert_eq!(oct.f_vector(), vec![6, 12, 8]);
    }

    #[test]
    fn subdivision_of_edge_is_path() {
        let b = barycentric_subdivision(&simplex(1));
        assert_eq!(b.f_vector(), vec![3, 2]);
        let mut gs: Vec<u32> = b.grading().unwrap().to_vec();
        gs.sort();
        assert_eq!(gs, vec![0, 0, 1]);
    }

    #[test]
    fn subdivision_of_triangle_boundary_is_hexagon() {
        let b = barycentric_subdivision(&boundary_simplex(2).unwrap());
        assert_eq!(b.f_vector(), vec![6, 6]);
        let g = b.grading().unwrap();
        for f in b.facets() {
            assert_ne!(g[f[0]] % 2, g[f[1]] % 2);
        }
        assert!(b.is_flag());
    }

    #[test]
    fn even_part_of_small_subdivisions() {
        let b2 = barycentric_subdivision(&boundary_simplex(2).unwrap());
        let e2 = even_subcomplex(&b2).unwrap();
        assert_eq!(e2.f_vector(), vec![3]);
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        let e3 = even_subcomplex(&b3).unwrap();
        assert_eq!(e3.f_vector(), vec![8, 12]);
        assert!(matches!(
            even_subcomplex(&boundary_simplex(2).unwrap()),
            Err(Error::MissingGrading)
        ));
    }

    #[test]
    fn removal_chains() {
        let b2 = barycentric_subdivision(&boundary_simplex(2).unwrap());
        let chain = odd_removal_chain(&b2, Tiebreak::default()).unwrap();
        assert_eq!(chain.steps.len(), 3);
        assert_eq!(chain.end, even_subcomplex(&b2).unwrap());
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        let chain = odd_removal_chain(&b3, Tiebreak::default()).unwrap();
        assert_eq!(chain.steps.len(), 6);
        assert!(chain.steps.iter().all(|s| s.grading == 1));
        assert_eq!(chain.end.f_vector(), vec![8, 12]);
        let even = even_subcomplex(&b3).unwrap();
        assert!(odd_removal_chain(&even, Tiebreak::default())
            .unwrap()
            .steps
            .is_empty());
    }

    #[test]
    fn removal_tiebreak_is_lexicographic() {
        let b2 = barycentric_subdivision(&boundary_simplex(2).unwrap());
        let chain = odd_removal_chain(&b2, Tiebreak::default()).unwrap();
        let removed: Vec<&str> = chain.steps.iter().map(|s| s.removed.as_str()).collect();
        assert_eq!(removed, vec!["{0,1}", "{0,2}", "{1,2}"]);
        let rev = odd_removal_chain(&b2, Tiebreak::ReverseLexicographic).unwrap();
        assert_eq!(rev.steps[0].removed, "{1,2}");
        assert_eq!(rev.end, chain.end);
    }

    #[test]
    fn link_split_on_hexagon_has_empty_upper_factor() {
        let b2 = barycentric_subdivision(&boundary_simplex(2).unwrap());
        let s = link_split_check(&b2, "{0,1}").unwrap();
        assert_eq!(s.d, 1);
        assert_eq!(s.lower.f_vector(), vec![2]);
        assert!(s.upper.is_empty());
        assert!(s.verified);
    }

    #[test]
    fn link_split_on_tetrahedron_subdivision() {
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        let s = link_split_check(&b3, "{0,1}").unwrap();
        assert_eq!(s.d, 1);
        assert_eq!(s.lower.named_facets().len(), 2);
        assert_eq!(s.upper.vertex_count(), 2);
        assert_eq!(s.upper.grading().unwrap(), &[0, 0]);
        assert!(s.verified);
        assert!(link_split_check(&b3, "{0}").is_err());
        assert!(link_split_check(&b3, "{9}").is_err());
    }

    #[test]
    fn vertex_link_in_subdivided_tetrahedron_is_square() {
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        let l = b3.vertex_link("{0,1}").unwrap();
        assert_eq!(l.f_vector(), vec![4, 4]);
        assert!(l.is_flag());
    }

    #[test]
    fn removal_family_membership() {
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        let chain = odd_removal_chain(&b3, Tiebreak::default()).unwrap();
        for s in &chain.steps {
            assert!(in_removal_family(&b3, &s.complex).unwrap());
        }
        // dropping an even vertex leaves the family
        let v = b3.vertex("{0}").unwrap();
        assert!(!in_removal_family(&b3, &b3.remove_vertices(&[v])).unwrap());
    }

    #[test]
    fn reference_shape_recognition() {
        for m in 1..=4 {
            let b = barycentric_subdivision(&boundary_simplex(m).unwrap());
            assert!(is_subdivided_simplex_boundary(&b, m));
            assert!(!is_subdivided_simplex_boundary(&b, m + 1));
        }
    }
}
