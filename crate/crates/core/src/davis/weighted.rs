use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalog::CubeCatalog;
use super::laplacian::Laplacian;
use super::sparse::Csr;
use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::racg::{members, CoxeterSystem, GenSet, WeightAssignment};
use crate::rational::{to_f64, Q};

/// Truncation scheme at the edge of the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// All cubes of the truncation.
    Neumann,
    /// Cochains vanishing on the frontier (cubes that are faces of cubes
    /// outside the truncation).
    Dirichlet,
}

impl FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neumann" => Ok(BoundaryCondition::Neumann),
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            other => Err(Error::Parse(format!(
                "unknown boundary condition `{other}`"
            ))),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Dirichlet => "dirichlet",
        })
    }
}

/// Which cube types are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Restriction {
    #[default]
    Full,
    /// Types that are faces of the full subcomplex on these generators:
    /// the cochains of `W_L Σ_A`.
    Subcomplex(GenSet),
    /// Types that are not faces of the full subcomplex: cochains of the pair
    /// `(Σ_L, W_L Σ_A)`.
    Pair(GenSet),
}

impl Restriction {
    /// Restriction to `a`, which must be a full subcomplex of `l`.
    pub fn subcomplex(l: &Complex, a: &Complex) -> Result<Self> {
        Ok(Restriction::Subcomplex(full_mask(l, a)?))
    }

    pub fn pair(l: &Complex, a: &Complex) -> Result<Self> {
        Ok(Restriction::Pair(full_mask(l, a)?))
    }

    pub fn keeps(&self, t: GenSet) -> bool {
        match *self {
            Restriction::Full => true,
            Restriction::Subcomplex(a) => t & a == t,
            Restriction::Pair(a) => t & a != t,
        }
    }

    pub fn code(&self) -> (u8, GenSet) {
        match *self {
            Restriction::Full => (0, 0),
            Restriction::Subcomplex(a) => (1, a),
            Restriction::Pair(a) => (2, a),
        }
    }

    pub fn from_code(code: u8, mask: GenSet) -> Result<Self> {
        match code {
            0 => Ok(Restriction::Full),
            1 => Ok(Restriction::Subcomplex(mask)),
            2 => Ok(Restriction::Pair(mask)),
            c => Err(Error::Parse(format!("unknown restriction code {c}"))),
        }
    }
}

/// Generator mask of `a`, checking that `a` is the full subcomplex of `l`
/// on its vertices.
pub fn full_mask(l: &Complex, a: &Complex) -> Result<GenSet> {
    let verts: Vec<usize> = a
        .names()
        .iter()
        .map(|n| l.vertex(n))
        .collect::<Result<_>>()?;
    if l.full_subcomplex(&verts).named_facets() != a.named_facets() {
        return Err(Error::NotFull);
    }
    Ok(verts.iter().fold(0, |m, &v| m | 1 << v))
}

/// A cube `(e, T)` of the identity chamber.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCell {
    /// Position among the kept cells of its dimension; `None` if the cube
    /// was removed by the truncation.
    pub index: Option<usize>,
    pub t: GenSet,
    /// `Π_{v∈T} q_v/(1+q_v)`.
    pub chamber: f64,
}

/// Truncated weighted cochain complex: integer coboundaries and diagonal
/// weights `q^w` of the cube representatives.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    pub radius: usize,
    pub bc: BoundaryCondition,
    pub restriction: Restriction,
    pub q: Vec<f64>,
    /// `d[k] : C^k → C^{k+1}`, rows indexed by `(k+1)`-cells.
    pub d: Vec<Csr<i8>>,
    pub gram: Vec<Vec<f64>>,
    pub identity: Vec<Vec<IdentityCell>>,
    /// Catalog index of each kept cell (empty when loaded from a dump).
    pub cells: Vec<Vec<u32>>,
}

impl WeightedComplex {
    pub fn assemble(
        catalog: &CubeCatalog,
        q: &WeightAssignment,
        bc: BoundaryCondition,
        restriction: Restriction,
    ) -> Result<Self> {
        let sys = catalog.system();
        if q.rank() != sys.rank() {
            return Err(Error::Precondition(format!(
                "{} weights for {} generators",
                q.rank(),
                sys.rank()
            )));
        }
        let top = catalog.top_dim();
        let ball = catalog.ball();
        let qf = q.to_f64();
        let elem_weight: Vec<f64> = (0..ball.len())
            .into_par_iter()
            .map(|i| ball.word(i).iter().map(|&s| qf[s as usize]).product())
            .collect();
        let cells: Vec<Vec<u32>> = (0..=top)
            .map(|k| {
                (0..catalog.count(k) as u32)
                    .into_par_iter()
                    .filter(|&i| {
                        let c = catalog.cubes(k)[i as usize];
                        restriction.keeps(c.t)
                            && (bc == BoundaryCondition::Neumann || !catalog.is_frontier(c))
                    })
                    .collect()
            })
            .collect();
        let gram: Vec<Vec<f64>> = (0..=top)
            .map(|k| {
                cells[k]
                    .iter()
                    .map(|&i| elem_weight[catalog.cubes(k)[i as usize].rep as usize])
                    .collect()
            })
            .collect();
        let d: Vec<Csr<i8>> = (0..top)
            .map(|k| catalog.coboundary(k).select(&cells[k + 1], &cells[k]))
            .collect();
        let identity = (0..=top)
            .map(|k| {
                catalog
                    .types(k)
                    .iter()
                    .filter(|&&t| restriction.keeps(t))
                    .map(|&t| {
                        let index = catalog
                            .index_of(0, t)
                            .and_then(|ci| cells[k].binary_search(&(ci as u32)).ok());
                        IdentityCell {
                            index,
                            t,
                            chamber: to_f64(&q.chamber_factor(t)),
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(WeightedComplex {
            radius: catalog.radius(),
            bc,
            restriction,
            q: qf,
            d,
            gram,
            identity,
            cells,
        })
    }

    /// Top cochain degree.
    pub fn top_dim(&self) -> usize {
        self.gram.len() - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.gram.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.gram.iter().map(Vec::len).collect()
    }

    /// `d^{k+1} d^k = 0`, exactly in integers.
    pub fn coboundary_squares_to_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].product_is_zero(&w[0]))
    }

    /// `G_{k+1}^{1/2} d_k G_k^{−1/2}`.
    pub fn symmetrized_coboundary(&self, k: usize) -> Csr<f64> {
        let (gk, gk1) = (&self.gram[k], &self.gram[k + 1]);
        self.d[k].map(|r, c, s| s as f64 * (gk1[r] / gk[c]).sqrt())
    }

    /// Symmetrized Hodge Laplacian in degree `k`.
    pub fn laplacian(&self, k: usize) -> Result<Laplacian> {
        if k > self.top_dim() {
            return Err(Error::DegreeOutOfRange(k));
        }
        let up = (k < self.top_dim()).then(|| self.symmetrized_coboundary(k));
        let down = (k > 0).then(|| self.symmetrized_coboundary(k - 1));
        Ok(Laplacian::new(self.count(k), up, down))
    }

    /// Identity-chamber cells of degree `k`, failing if any was truncated
    /// away.
    pub fn identity_cells(&self, k: usize) -> Result<Vec<(usize, f64)>> {
        let cells = self.identity.get(k).ok_or(Error::DegreeOutOfRange(k))?;
        cells
            .iter()
            .map(|c| {
                c.index
                    .map(|i| (i, c.chamber))
                    .ok_or_else(|| Error::MissingIdentityCube(format!("{:#b}", c.t)))
            })
            .collect()
    }

    /// `Σ_{|T|=k} Π q_v/(1+q_v)` over the identity types kept by the
    /// restriction.
    pub fn chamber_dimension(&self, k: usize) -> f64 {
        self.identity
            .get(k)
            .map_or(0.0, |c| c.iter().map(|c| c.chamber).sum())
    }
}

/// Exact weight `q^w` of the representative of a catalog cube.
pub fn exact_gram(catalog: &CubeCatalog, q: &WeightAssignment, k: usize, idx: usize) -> Q {
    let rep = catalog.cubes(k)[idx].rep as usize;
    q.weight_of_word(&catalog.ball().word(rep))
}

/// Exact chamber dimension `Σ_{|T|=k} Π q_v/(1+q_v)` over the spherical sets
/// of `sys` kept by `restriction`.
pub fn exact_chamber_dimension(
    sys: &CoxeterSystem,
    q: &WeightAssignment,
    k: usize,
    restriction: Restriction,
) -> Q {
    sys.spherical_sets()
        .iter()
        .filter(|&&t| t.count_ones() as usize == k && restriction.keeps(t))
        .map(|&t| {
            members(t).fold(Q::one(), |acc, s| {
                let qs = q.get(s);
                acc * qs / (Q::one() + qs)
            })
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{boundary_simplex, cycle, Complex};
    use crate::rational::{q_frac, q_int};

    fn setup(l: &Complex, r: usize) -> CubeCatalog {
        CubeCatalog::build(&CoxeterSystem::from_complex(l).unwrap(), r).unwrap()
    }

    fn point() -> Complex {
        Complex::from_named(&["a"], &[vec!["a"]], None).unwrap()
    }

    #[test]
    fn point_gram_and_incidence() {
        let c = setup(&point(), 1);
        let q = WeightAssignment::uniform(1, q_frac(1, 3)).unwrap();
        let wc = WeightedComplex::assemble(&c, &q, BoundaryCondition::Neumann, Restriction::Full)
            .unwrap();
        assert_eq!(wc.counts(), vec![2, 1]);
        assert_eq!(wc.d[0].values, vec![-1, 1]);
        assert_eq!(exact_gram(&c, &q, 0, 1), q_frac(1, 3));
        assert_eq!(exact_gram(&c, &q, 1, 0), q_int(1));
        assert!((wc.gram[0][1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(wc.identity_cells(1).unwrap(), vec![(0, 0.25)]);
    }

    #[test]
    fn restrictions() {
        let l = boundary_simplex(1).unwrap();
        let a = Complex::from_named(&["0"], &[vec!["0"]], None).unwrap();
        let c = setup(&l, 3);
        let q = WeightAssignment::uniform(2, q_int(1)).unwrap();
        let sub = WeightedComplex::assemble(
            &c,
            &q,
            BoundaryCondition::Neumann,
            Restriction::subcomplex(&l, &a).unwrap(),
        )
        .unwrap();
        assert_eq!(sub.count(0), 7);
        assert_eq!(sub.count(1), 3);
        let pair = WeightedComplex::assemble(
            &c,
            &q,
            BoundaryCondition::Neumann,
            Restriction::pair(&l, &l).unwrap(),
        )
        .unwrap();
        assert_eq!(pair.counts(), vec![0, 0]);
        let hex = cycle(6).unwrap();
        let path = hex.full_subcomplex(&[0, 1, 2]);
        assert!(Restriction::subcomplex(&hex, &path).is_ok());
        let not_full =
            Complex::from_named(&["0", "1", "2"], &[vec!["0", "1"], vec!["2"]], None).unwrap();
        assert!(matches!(
            Restriction::subcomplex(&hex, &not_full),
            Err(Error::NotFull)
        ));
    }

    #[test]
    fn dirichlet_keeps_identity_cubes_and_differential() {
        let l = cycle(6).unwrap();
        let c = setup(&l, 3);
        let q = WeightAssignment::uniform(6, q_int(1)).unwrap();
        let n = WeightedComplex::assemble(&c, &q, BoundaryCondition::Neumann, Restriction::Full)
            .unwrap();
        let d = WeightedComplex::assemble(&c, &q, BoundaryCondition::Dirichlet, Restriction::Full)
            .unwrap();
        assert!(d.counts().iter().zip(n.counts()).all(|(a, b)| *a <= b));
        assert!(d.count(0) < n.count(0));
        assert!(d.coboundary_squares_to_zero());
        for k in 0..=2 {
            assert_eq!(
                d.identity_cells(k).unwrap().len(),
                n.identity_cells(k).unwrap().len()
            );
        }
    }
}
