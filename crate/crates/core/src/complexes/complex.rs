use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A face as a sorted list of vertex indices.
pub type Face = Vec<usize>;

/// All faces of a complex, grouped by dimension. Entry `k` holds the
/// `k`-dimensional faces; the empty face is implicit.
#[derive(Clone, Debug)]
pub struct FaceIndex {
    by_dim: Vec<Vec<Face>>,
    lookup: HashMap<Face, usize>,
}

impl FaceIndex {
    fn build(facets: &[Face]) -> Self {
        let mut seen: HashSet<Face> = HashSet::new();
        for f in facets {
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let face: Face = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                seen.insert(face);
            }
        }
        let top = facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for face in seen {
            by_dim[face.len() - 1].push(face);
        }
        let mut lookup = HashMap::new();
        for faces in by_dim.iter_mut() {
            faces.sort();
            for (i, f) in faces.iter().enumerate() {
                lookup.insert(f.clone(), i);
            }
        }
        FaceIndex { by_dim, lookup }
    }

    /// Faces of dimension `k` in lexicographic order.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.by_dim.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Position of a nonempty face within its dimension.
    pub fn position(&self, face: &[usize]) -> Option<usize> {
        self.lookup.get(face).copied()
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }
}

/// A finite abstract simplicial complex stored by its facets.
///
/// The empty complex (only the empty face) has no vertices and the single
/// facet `[]`. An optional grading assigns a nonnegative "dimension" to every
/// vertex; it is present on barycentric subdivisions and their subcomplexes.
#[derive(Clone)]
pub struct Complex {
    names: Vec<String>,
    index: HashMap<String, usize>,
    facets: Vec<Face>,
    grading: Option<Vec<u32>>,
    faces: OnceLock<FaceIndex>,
}

impl Complex {
    /// Builds a complex from vertex names and facets given by vertex index.
    ///
    /// Facets are deduplicated and non-maximal ones dropped; vertices not
    /// covered by any facet become isolated points.
    pub fn new(
        names: Vec<String>,
        facets: Vec<Vec<usize>>,
        grading: Option<Vec<u32>>,
    ) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate vertex `{name}`")));
            }
        }
        if let Some(g) = &grading {
            if g.len() != n {
                return Err(Error::InvalidComplex("grading length mismatch".into()));
            }
        }
        let mut cleaned: Vec<Face> = Vec::with_capacity(facets.len());
        for mut f in facets {
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidComplex(format!(
                    "facet references vertex {v} of {n}"
                )));
            }
            if f.len() > 63 {
                return Err(Error::InvalidComplex(
                    "facets above dimension 62 are unsupported".into(),
                ));
            }
            cleaned.push(f);
        }
        let mut covered = vec![false; n];
        for f in &cleaned {
            for &v in f {
                covered[v] = true;
            }
        }
        cleaned.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
        let facets = maximal_faces(cleaned);
        let c = Complex {
            names,
            index,
            facets,
            grading,
            faces: OnceLock::new(),
        };
        if c.grading.is_some() {
            for f in &c.facets {
                let mut gs: Vec<u32> = f.iter().map(|&v| c.grade(v).unwrap()).collect();
                gs.sort_unstable();
                if gs.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidComplex(
                        "graded face has two vertices of equal grading".into(),
                    ));
                }
            }
        }
        Ok(c)
    }

    /// Builds a complex from named facets.
    pub fn from_named<S: AsRef<str>>(
        vertices: &[S],
        facets: &[Vec<S>],
        grading: Option<&BTreeMap<String, u32>>,
    ) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut fs = Vec::with_capacity(facets.len());
        for f in facets {
            let mut face = Vec::with_capacity(f.len());
            for v in f {
                let v = v.as_ref();
                face.push(
                    *lookup
                        .get(v)
                        .ok_or_else(|| Error::UnknownVertex(v.to_string()))?,
                );
            }
            fs.push(face);
        }
        let grading = match grading {
            None => None,
            Some(map) => {
                let mut g = Vec::with_capacity(names.len());
                for name in &names {
                    g.push(*map.get(name).ok_or_else(|| {
                        Error::InvalidComplex(format!("vertex `{name}` has no grading"))
                    })?);
                }
                Some(g)
            }
        };
        Complex::new(names, fs, grading)
    }

    /// The complex whose only face is the empty face.
    pub fn empty() -> Self {
        Complex {
            names: Vec::new(),
            index: HashMap::new(),
            facets: vec![Vec::new()],
            grading: None,
            faces: OnceLock::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.grading.as_deref()
    }

    pub fn grade(&self, v: usize) -> Option<u32> {
        self.grading.as_ref().map(|g| g[v])
    }

    pub fn is_graded(&self) -> bool {
        self.grading.is_some()
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn is_pure(&self) -> bool {
        let d = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == d)
    }

    /// Lazily materialized face index.
    pub fn face_index(&self) -> &FaceIndex {
        self.faces.get_or_init(|| FaceIndex::build(&self.facets))
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        self.face_index().faces(k)
    }

    /// Number of faces in each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let idx = self.face_index();
        (0..=idx.top_dim().map_or(-1, |d| d as isize))
            .map(|k| idx.faces(k as usize).len())
            .collect()
    }

    /// Ordinary Euler characteristic (without the empty face).
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Whether a vertex set (given sorted or not) spans a face.
    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.facets
            .iter()
            .any(|f| face.iter().all(|v| f.binary_search(v).is_ok()))
    }

    pub fn face_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Face> {
        let mut face = names
            .iter()
            .map(|n| self.vertex(n.as_ref()))
            .collect::<Result<Face>>()?;
        face.sort_unstable();
        face.dedup();
        Ok(face)
    }

    pub fn face_names(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&v| self.names[v].clone()).collect()
    }

    /// Adjacency lists of the 1-skeleton.
    pub fn neighbors(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count()];
        for f in &self.facets {
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        adj
    }

    /// True iff every set of pairwise adjacent vertices spans a face.
    ///
    /// Enumerates maximal cliques of the 1-skeleton and checks that each one
    /// spans a face.
    pub fn is_flag(&self) -> bool {
        let adj = self.neighbors();
        let mut flag = true;
        let all: BTreeSet<usize> = (0..self.vertex_count()).collect();
        bron_kerbosch(&adj, Vec::new(), all, BTreeSet::new(), &mut |clique| {
            if clique.len() > 2 && !self.contains_face(clique) {
                flag = false;
            }
            flag
        });
        flag
    }

    /// Full subcomplex spanned by the given vertices (indices of `self`).
    /// Names and grading are inherited; vertex order follows `self`.
    pub fn full_subcomplex(&self, keep: &[usize]) -> Complex {
        let mut mark = vec![usize::MAX; self.vertex_count()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            mark[old] = new;
        }
        if sorted.is_empty() {
            return Complex::empty();
        }
        let names = sorted.iter().map(|&v| self.names[v].clone()).collect();
        let grading = self
            .grading
            .as_ref()
            .map(|g| sorted.iter().map(|&v| g[v]).collect());
        let facets = self
            .facets
            .iter()
            .map(|f| {
                f.iter()
                    .filter(|&&v| mark[v] != usize::MAX)
                    .map(|&v| mark[v])
                    .collect()
            })
            .filter(|f: &Face| !f.is_empty())
            .collect();
        Complex::new(names, facets, grading).expect("full subcomplex of a valid complex")
    }

    /// Full subcomplex on the complement of the given vertices.
    pub fn remove_vertices(&self, drop: &[usize]) -> Complex {
        let keep: Vec<usize> = (0..self.vertex_count())
            .filter(|v| !drop.contains(v))
            .collect();
        self.full_subcomplex(&keep)
    }

    /// Link of a face: `{ τ : τ ∩ σ = ∅, τ ∪ σ a face }`.
    pub fn link(&self, sigma: &[usize]) -> Result<Complex> {
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        sigma.dedup();
        if !self.contains_face(&sigma) {
            return Err(Error::NotAFace(format!("{:?}", self.face_names(&sigma))));
        }
        let mut verts = BTreeSet::new();
        let mut rest = Vec::new();
        for f in &self.facets {
            if sigma.iter().all(|v| f.binary_search(v).is_ok()) {
                let r: Face = f
                    .iter()
                    .filter(|v| sigma.binary_search(v).is_err())
                    .copied()
                    .collect();
                verts.extend(r.iter().copied());
                rest.push(r);
            }
        }
        if verts.is_empty() {
            return Ok(Complex::empty());
        }
        let verts: Vec<usize> = verts.into_iter().collect();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = verts.iter().map(|&v| self.names[v].clone()).collect();
        let grading = self
            .grading
            .as_ref()
            .map(|g| verts.iter().map(|&v| g[v]).collect());
        let facets = rest
            .into_iter()
            .map(|f| f.iter().map(|v| pos[v]).collect())
            .collect();
        Complex::new(names, facets, grading)
    }

    /// Link of a single vertex given by name.
    pub fn vertex_link(&self, name: &str) -> Result<Complex> {
        let v = self.vertex(name)?;
        self.link(&[v])
    }

    /// Closed star of a vertex as a full subcomplex (the cone `v ∗ link(v)`
    /// when the complex is flag).
    pub fn closed_star(&self, v: usize) -> Complex {
        let mut keep: BTreeSet<usize> = BTreeSet::from([v]);
        for f in &self.facets {
            if f.binary_search(&v).is_ok() {
                keep.extend(f.iter().copied());
            }
        }
        self.full_subcomplex(&keep.into_iter().collect::<Vec<_>>())
    }

    /// Facets as sets of names; the canonical comparison key.
    pub fn named_facets(&self) -> BTreeSet<BTreeSet<String>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&v| self.names[v].clone()).collect())
            .collect()
    }

    /// Grading keyed by name.
    pub fn named_grading(&self) -> Option<BTreeMap<String, u32>> {
        self.grading
            .as_ref()
            .map(|g| self.names.iter().cloned().zip(g.iter().copied()).collect())
    }

    /// Returns a copy with the grading replaced.
    pub fn with_grading(&self, grading: Option<Vec<u32>>) -> Result<Complex> {
        Complex::new(self.names.clone(), self.facets.clone(), grading)
    }

    /// Returns a copy with every vertex renamed through `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Complex {
        let names = self.names.iter().map(|n| f(n)).collect();
        Complex::new(names, self.facets.clone(), self.grading.clone())
            .expect("renaming preserves validity")
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        let a: BTreeSet<&String> = self.names.iter().collect();
        let b: BTreeSet<&String> = other.names.iter().collect();
        a == b
            && self.named_facets() == other.named_facets()
            && self.named_grading() == other.named_grading()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("vertices", &self.names)
            .field("facets", &self.facets)
            .field("grading", &self.grading)
            .finish()
    }
}

fn maximal_faces(mut faces: Vec<Face>) -> Vec<Face> {
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut out: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        let contained = out
            .iter()
            .any(|g| g.len() > f.len() && f.iter().all(|v| g.binary_search(v).is_ok()));
        if !contained {
            out.push(f);
        }
    }
    if out.len() > 1 {
        out.retain(|f| !f.is_empty());
    }
    if out.is_empty() {
        out.push(Vec::new());
    }
    out.sort();
    out
}

/// Bron–Kerbosch without pivoting; `visit` returns false to stop early.
fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if p.is_empty() && x.is_empty() {
        let mut c = r.clone();
        c.sort_unstable();
        return visit(&c);
    }
    while let Some(&v) = p.iter().next() {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.intersection(&adj[v]).copied().collect();
        let x2 = x.intersection(&adj[v]).copied().collect();
        if !bron_kerbosch(adj, r2, p2, x2, visit) {
            return false;
        }
        p.remove(&v);
        x.insert(v);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Complex {
        let names = (0..n).map(|i| i.to_string()).collect();
        let facets = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Complex::new(names, facets, None).unwrap()
    }

    #[test]
    fn facets_are_maximalized() {
        let c = Complex::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![vec![0, 1], vec![0, 1, 2], vec![1, 0]],
            None,
        )
        .unwrap();
        assert_eq!(c.facets(), &[vec![0, 1, 2], vec![3]]);
        assert_eq!(c.f_vector(), vec![4, 3, 1]);
    }

    #[test]
    fn empty_complex() {
        let e = Complex::empty();
        assert_eq!(e.dim(), -1);
        assert!(e.f_vector().is_empty());
        assert!(e.is_flag());
    }

    #[test]
    fn cycles_and_flagness() {
        assert!(!cycle(3).is_flag());
        assert!(cycle(4).is_flag());
        assert!(cycle(6).is_flag());
    }

    #[test]
    fn link_of_cycle_vertex_is_two_points() {
        let c = cycle(6);
        let l = c.link(&[0]).unwrap();
        assert_eq!(l.vertex_count(), 2);
        assert_eq!(l.f_vector(), vec![2]);
    }

    #[test]
    fn link_rejects_non_face() {
        assert!(matches!(cycle(6).link(&[0, 2]), Err(Error::NotAFace(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Complex::new(vec!["a".into(), "a".into()], vec![], None).is_err());
    }

    #[test]
    fn graded_faces_need_distinct_gradings() {
        let r = Complex::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1]],
            Some(vec![0, 0]),
        );
        assert!(r.is_err());
    }
}
