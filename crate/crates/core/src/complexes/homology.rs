use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::complex::Complex;

type SparseCol = Vec<(usize, BigRational)>;

/// Rank of a sparse matrix over the rationals, given column by column.
///
/// Column reduction keyed on the lowest nonzero row; exact throughout.
pub fn rational_rank(columns: Vec<SparseCol>) -> usize {
    let mut pivots: BTreeMap<usize, SparseCol> = BTreeMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.retain(|(_, x)| !x.is_zero());
        col.sort_by_key(|(r, _)| *r);
        while let Some((low, coeff)) = col.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let factor = &coeff / &p.last().unwrap().1;
                    col = axpy(&col, p, &factor);
                }
                None => {
                    pivots.insert(low, col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `a − factor · b` for sorted sparse columns.
fn axpy(a: &SparseCol, b: &SparseCol, factor: &BigRational) -> SparseCol {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - factor * &b[j].1;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Unreduced rational Betti numbers `b_0 ..= b_dim`; empty for the empty
/// complex.
pub fn rational_homology(c: &Complex) -> Vec<usize> {
    if c.is_empty() {
        return Vec::new();
    }
    let idx = c.face_index();
    let top = c.dim() as usize;
    // rank of ∂_k : C_k → C_{k−1}, k = 1..=top
    let mut ranks = vec![0usize; top + 2];
    for (k, rank) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
        let cols: Vec<SparseCol> = idx
            .faces(k)
            .iter()
            .map(|f| {
                (0..f.len())
                    .map(|i| {
                        let mut g = f.clone();
                        g.remove(i);
                        let sign = if i % 2 == 0 {
                            BigRational::one()
                        } else {
                            -BigRational::one()
                        };
                        (idx.position(&g).unwrap(), sign)
                    })
                    .collect()
            })
            .collect();
        *rank = rational_rank(cols);
    }
    (0..=top)
        .map(|k| idx.faces(k).len() - ranks[k] - ranks[k + 1])
        .collect()
}

/// Unreduced Betti vector of the `m`-sphere; `S^{-1}` is the empty complex.
pub fn sphere_betti(m: isize) -> Vec<usize> {
    match m {
        m if m < 0 => Vec::new(),
        0 => vec![2],
        m => {
            let mut b = vec![0; m as usize + 1];
            b[0] = 1;
            b[m as usize] = 1;
            b
        }
    }
}

/// Outcome of [`is_ghs`].
#[derive(Clone, Debug, Serialize)]
pub struct GhsCertificate {
    pub dimension: isize,
    /// Betti vector of the link of each face, keyed by the face's vertex
    /// names (the empty key is the complex itself).
    pub per_link_homology: BTreeMap<String, Vec<usize>>,
    pub verdict: bool,
}

/// Checks that `c` is a rational generalized homology sphere: pure, and the
/// link of every face `σ` (including `∅`) has the rational homology of
/// `S^{m−|σ|}`.
pub fn is_ghs(c: &Complex) -> GhsCertificate {
    let m = c.dim();
    let mut cert = GhsCertificate {
        dimension: m,
        per_link_homology: BTreeMap::new(),
        verdict: false,
    };
    if !c.is_pure() {
        return cert;
    }
    let mut ok = true;
    let whole = rational_homology(c);
    ok &= whole == sphere_betti(m);
    cert.per_link_homology.insert(String::new(), whole);
    if m >= 0 {
        for k in 0..=m as usize {
            for f in c.faces(k) {
                let link = c.link(f).expect("face of the complex");
                let h = rational_homology(&link);
                ok &= h == sphere_betti(m - f.len() as isize);
                cert.per_link_homology.insert(c.face_names(f).join(","), h);
            }
        }
    }
    cert.verdict = ok;
    cert
}

/// Reduced Euler characteristic `−1 + Σ (−1)^k b_k`.
pub fn reduced_euler(betti: &[usize]) -> i64 {
    -1 + betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::ops::{
        barycentric_subdivision, boundary_simplex, cycle, even_subcomplex, simplex,
    };

    #[test]
    fn homology_of_small_complexes() {
        assert_eq!(rational_homology(&cycle(6).unwrap()), vec![1, 1]);
        assert_eq!(
            rational_homology(&boundary_simplex(3).unwrap()),
            vec![1, 0, 1]
        );
        assert_eq!(rational_homology(&simplex(3)), vec![1, 0, 0, 0]);
        assert_eq!(rational_homology(&Complex::empty()), Vec::<usize>::new());
    }

    #[test]
    fn even_part_of_subdivided_tetrahedron() {
        let b3 = barycentric_subdivision(&boundary_simplex(3).unwrap());
        assert_eq!(
            rational_homology(&even_subcomplex(&b3).unwrap()),
            vec![1, 5]
        );
    }

    #[test]
    fn ghs_examples() {
        let hex = cycle(6).unwrap();
        let cert = is_ghs(&hex);
        assert!(cert.verdict);
        assert_eq!(cert.dimension, 1);
        assert!(is_ghs(&barycentric_subdivision(&boundary_simplex(3).unwrap())).verdict);
        let path = barycentric_subdivision(&simplex(1));
        assert!(!is_ghs(&path).verdict);
        // a wedge of two circles is pure but not a sphere
        let wedge = Complex::new(
            (0..5).map(|i| i.to_string()).collect(),
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![0, 2],
                vec![0, 3],
                vec![3, 4],
                vec![0, 4],
            ],
            None,
        )
        .unwrap();
        assert!(!is_ghs(&wedge).verdict);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let cols = vec![
            vec![(0, q(1)), (1, q(2))],
            vec![(0, q(2)), (1, q(4))],
            vec![(1, q(3))],
        ];
        assert_eq!(rational_rank(cols), 2);
    }
}
