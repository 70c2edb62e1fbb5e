use rayon::prelude::*;
use serde::Serialize;

use super::sparse::Csr;
use crate::error::{Error, Result};
use crate::racg::{members, Ball, CoxeterSystem, GenSet, Side};

/// Default cap on the total number of cubes in a catalog.
pub const DEFAULT_MAX_CELLS: usize = 40_000_000;

/// A cube `wW_T` of the Davis complex: `rep` indexes the shortest element
/// of the coset in the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub rep: u32,
    pub t: GenSet,
}

/// All cubes of the truncation `K_R`: cubes `(w, T)` with `w` shortest in
/// `wW_T` and `|w| + |T| ≤ R`, so that every vertex lies in the ball.
///
/// Cubes of dimension `k` are ordered by representative, then by type in
/// the order of [`CoxeterSystem::spherical_sets`].
#[derive(Clone, Debug)]
pub struct CubeCatalog {
    ball: Ball,
    descents: Vec<GenSet>,
    types: Vec<Vec<GenSet>>,
    cubes: Vec<Vec<Cube>>,
    offsets: Vec<Vec<u32>>,
}

/// Cube counts per dimension of a catalog.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CatalogSummary {
    pub radius: usize,
    pub elements: usize,
    pub cubes: Vec<usize>,
}

impl CubeCatalog {
    pub fn new(ball: Ball) -> Result<Self> {
        Self::with_budget(ball, DEFAULT_MAX_CELLS)
    }

    pub fn with_budget(ball: Ball, max_cells: usize) -> Result<Self> {
        let sys = ball.system().clone();
        let radius = ball.radius();
        let descents: Vec<GenSet> = (0..ball.len())
            .into_par_iter()
            .map(|i| ball.descents(i, Side::Right))
            .collect();
        let top = sys.max_spherical();
        let types: Vec<Vec<GenSet>> = (0..=top)
            .map(|k| {
                sys.spherical_sets()
                    .iter()
                    .copied()
                    .filter(|t| t.count_ones() as usize == k)
                    .collect()
            })
            .collect();
        let mut cubes = Vec::with_capacity(top + 1);
        let mut offsets = Vec::with_capacity(top + 1);
        let mut total = 0usize;
        for (k, tk) in types.iter().enumerate() {
            if k > radius {
                cubes.push(Vec::new());
                offsets.push(vec![0; ball.len() + 1]);
                continue;
            }
            let end = ball.shell(radius - k).end;
            let per: Vec<Vec<GenSet>> = (0..end)
                .into_par_iter()
                .map(|i| {
                    tk.iter()
                        .copied()
                        .filter(|&t| t & descents[i] == 0)
                        .collect()
                })
                .collect();
            let count: usize = per.iter().map(Vec::len).sum();
            total += count;
            if total > max_cells {
                return Err(Error::Budget {
                    what: "cubes".into(),
                    reached: k,
                });
            }
            let mut list = Vec::with_capacity(count);
            let mut off = Vec::with_capacity(ball.len() + 1);
            off.push(0u32);
            for (i, ts) in per.into_iter().enumerate() {
                list.extend(ts.into_iter().map(|t| Cube { rep: i as u32, t }));
                off.push(list.len() as u32);
            }
            off.resize(ball.len() + 1, list.len() as u32);
            cubes.push(list);
            offsets.push(off);
        }
        Ok(CubeCatalog {
            ball,
            descents,
            types,
            cubes,
            offsets,
        })
    }

    /// Builds the ball and the catalog in one step.
    pub fn build(sys: &CoxeterSystem, radius: usize) -> Result<Self> {
        Self::new(Ball::new(sys, radius)?)
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.ball.system()
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    /// Largest cube dimension: `dim L`, or 0 when `L` is empty.
    pub fn top_dim(&self) -> usize {
        self.cubes.len() - 1
    }

    pub fn cubes(&self, k: usize) -> &[Cube] {
        self.cubes.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.cubes(k).len()
    }

    pub fn summary(&self) -> CatalogSummary {
        CatalogSummary {
            radius: self.radius(),
            elements: self.ball.len(),
            cubes: (0..=self.top_dim()).map(|k| self.count(k)).collect(),
        }
    }

    /// Spherical types of dimension `k`, in catalog order.
    pub fn types(&self, k: usize) -> &[GenSet] {
        &self.types[k]
    }

    pub fn right_descents(&self, rep: usize) -> GenSet {
        self.descents[rep]
    }

    /// Index of cube `(rep, t)` within its dimension.
    pub fn index_of(&self, rep: usize, t: GenSet) -> Option<usize> {
        let k = t.count_ones() as usize;
        let off = self.offsets.get(k)?;
        let (a, b) = (off[rep] as usize, off[rep + 1] as usize);
        self.cubes[k][a..b]
            .iter()
            .position(|c| c.t == t)
            .map(|p| a + p)
    }

    /// Codimension-one faces of cube `idx` of dimension `k ≥ 1` with
    /// incidence signs: across the `j`-th generator `t` of the sorted type,
    /// `(−1)^j [(wt, T∖t) − (w, T∖t)]`.
    pub fn faces(&self, k: usize, idx: usize) -> Vec<(usize, i8)> {
        let cube = self.cubes[k][idx];
        let rep = cube.rep as usize;
        let mut out = Vec::with_capacity(2 * k);
        for (j, t) in members(cube.t).enumerate() {
            let u = cube.t & !(1u64 << t);
            let sign: i8 = if j % 2 == 0 { 1 } else { -1 };
            let upper = self
                .ball
                .mul_gen(rep, t)
                .expect("vertices of catalog cubes lie in the ball");
            out.push((
                self.index_of(upper, u)
                    .expect("upper face is in the catalog"),
                sign,
            ));
            out.push((
                self.index_of(rep, u).expect("lower face is in the catalog"),
                -sign,
            ));
        }
        out
    }

    /// Coboundary `d^k : C^k → C^{k+1}` as integer incidences, rows indexed
    /// by `(k+1)`-cubes.
    pub fn coboundary(&self, k: usize) -> Csr<i8> {
        let rows: Vec<Vec<(u32, i8)>> = (0..self.count(k + 1))
            .into_par_iter()
            .map(|i| {
                let mut f: Vec<(u32, i8)> = self
                    .faces(k + 1, i)
                    .into_iter()
                    .map(|(c, s)| (c as u32, s))
                    .collect();
                f.sort_unstable();
                f
            })
            .collect();
        Csr::from_rows(self.count(k), rows)
    }

    /// Checks `d^{k+1} d^k = 0` in integers for every `k`.
    pub fn coboundary_squares_to_zero(&self) -> bool {
        let d: Vec<Csr<i8>> = (0..self.top_dim()).map(|k| self.coboundary(k)).collect();
        d.windows(2).all(|w| w[1].product_is_zero(&w[0]))
    }

    /// Whether cube `(u, U)` is a face of some cube of the Davis complex
    /// outside the truncation: some spherical `T ⊇ U` has
    /// `|u| + |T| − |D(u) ∩ T| > R`, the left side being the length of the
    /// longest element of `uW_T`.
    pub fn is_frontier(&self, cube: Cube) -> bool {
        let u = cube.rep as usize;
        let len = self.ball.length(u);
        let d = self.descents[u];
        self.system().spherical_sets().iter().any(|&t| {
            t & cube.t == cube.t
                && len + t.count_ones() as usize - (d & t).count_ones() as usize > self.radius()
        })
    }

    /// Checks that every catalog cube's representative is shortest in its
    /// coset.
    pub fn representatives_are_shortest(&self) -> bool {
        self.cubes
            .iter()
            .flatten()
            .all(|c| c.t & self.descents[c.rep as usize] == 0)
    }

    /// Link of a vertex: the types of the catalog cubes containing it.
    /// Inconclusive when the vertex touches the frontier.
    pub fn local_link_check(&self, vertex: usize) -> LinkCheck {
        let frontier = self.is_frontier(Cube {
            rep: vertex as u32,
            t: 0,
        });
        if frontier {
            return LinkCheck::Inconclusive;
        }
        let sys = self.system();
        let len = self.ball.length(vertex);
        let dv = self.descents[vertex];
        let word = self.ball.word(vertex);
        let mut link: Vec<GenSet> = Vec::new();
        for k in 0..=self.top_dim() {
            let lo = len.saturating_sub(k);
            for c in &self.cubes[k] {
                let r = c.rep as usize;
                let lr = self.ball.length(r);
                if lr < lo || lr > len {
                    continue;
                }
                // v ∈ rep·W_T iff v's coset representative for T is rep
                let x = c.t & dv;
                let mut w = word.clone();
                for s in members(x) {
                    sys.push(&mut w, s);
                }
                if self.ball.index_of_word(&w) == Some(r) {
                    link.push(c.t);
                }
            }
        }
        link.sort_unstable();
        let mut expected = sys.spherical_sets().to_vec();
        expected.sort_unstable();
        if link == expected {
            LinkCheck::Isomorphic
        } else {
            LinkCheck::NotIsomorphic
        }
    }
}

/// Outcome of [`CubeCatalog::local_link_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinkCheck {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cycle, subdivided_boundary, Complex};

    fn catalog(l: &Complex, r: usize) -> CubeCatalog {
        CubeCatalog::build(&CoxeterSystem::from_complex(l).unwrap(), r).unwrap()
    }

    fn point() -> Complex {
        Complex::from_named(&["a"], &[vec!["a"]], None).unwrap()
    }

    fn two_points() -> Complex {
        Complex::from_named(&["a", "b"], &[vec!["a"], vec!["b"]], None).unwrap()
    }

    #[test]
    fn small_catalogs() {
        assert_eq!(catalog(&two_points(), 2).summary().cubes, vec![5, 4]);
        assert_eq!(catalog(&point(), 1).summary().cubes, vec![2, 1]);
        // hexagon at R = 1: 7 vertices, 6 edges at the identity; squares
        // need two steps
        assert_eq!(
            catalog(&cycle(6).unwrap(), 1).summary().cubes,
            vec![7, 6, 0]
        );
        assert_eq!(
            catalog(&cycle(6).unwrap(), 2).summary().cubes,
            vec![31, 36, 6]
        );
    }

    #[test]
    fn coboundary_is_a_differential() {
        for l in [
            cycle(6).unwrap(),
            subdivided_boundary(2).unwrap(),
            subdivided_boundary(3).unwrap(),
        ] {
            let c = catalog(&l, 3);
            assert!(c.representatives_are_shortest());
            assert!(c.coboundary_squares_to_zero());
        }
    }

    #[test]
    fn vertex_links() {
        let c = catalog(&cycle(6).unwrap(), 3);
        assert_eq!(c.local_link_check(0), LinkCheck::Isomorphic);
        let a = c.ball().index_of_word(&[0]).unwrap();
        assert_eq!(c.local_link_check(a), LinkCheck::Isomorphic);
        let far = c.ball().shell(3).start;
        assert_eq!(c.local_link_check(far), LinkCheck::Inconclusive);
        let d = catalog(&two_points(), 2);
        assert_eq!(d.local_link_check(0), LinkCheck::Isomorphic);
        let b3 = catalog(&subdivided_boundary(3).unwrap(), 3);
        assert_eq!(b3.local_link_check(0), LinkCheck::Isomorphic);
    }

    #[test]
    fn frontier_of_finite_group_is_empty() {
        let l = Complex::from_named(&["a", "b"], &[vec!["a", "b"]], None).unwrap();
        let c = catalog(&l, 2);
        assert!(c.cubes.iter().flatten().all(|&q| !c.is_frontier(q)));
        let d = catalog(&two_points(), 3);
        let frontier: Vec<usize> = d
            .cubes(0)
            .iter()
            .filter(|&&q| d.is_frontier(q))
            .map(|q| q.rep as usize)
            .collect();
        assert_eq!(
            frontier
                .iter()
                .map(|&i| d.ball().length(i))
                .collect::<Vec<_>>(),
            vec![3, 3]
        );
    }
}
