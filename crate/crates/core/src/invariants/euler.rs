use num_traits::One;

use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::racg::{Poly, RationalFunction, WeightAssignment};
use crate::rational::{q_int, Q};

/// `χ_q(L) = Σ_{T ∈ L, T = ∅ allowed} Π_{v∈T} (−q_v/(1+q_v))`, exactly.
/// Weights are indexed by the vertices of `l`.
pub fn weighted_euler(l: &Complex, q: &WeightAssignment) -> Result<Q> {
    let all: Vec<usize> = (0..l.vertex_count()).collect();
    weighted_euler_on(l, &all, q)
}

/// `χ_q` of the full subcomplex of `l` on `keep`, with the weights of `l`.
pub fn weighted_euler_on(l: &Complex, keep: &[usize], q: &WeightAssignment) -> Result<Q> {
    if q.rank() != l.vertex_count() {
        return Err(Error::Precondition(format!(
            "{} weights for {} vertices",
            q.rank(),
            l.vertex_count()
        )));
    }
    let mut inside = vec![false; l.vertex_count()];
    keep.iter().for_each(|&v| inside[v] = true);
    let factor: Vec<Q> = q
        .values()
        .iter()
        .map(|x| -(x.clone() / (Q::one() + x)))
        .collect();
    let mut sum = Q::one();
    if !l.is_empty() {
        for k in 0..=l.dim() as usize {
            for f in l.faces(k) {
                if f.iter().all(|&v| inside[v]) {
                    sum += f.iter().fold(Q::one(), |acc, &v| acc * &factor[v]);
                }
            }
        }
    }
    Ok(sum)
}

/// Uniform `χ_q(L) = Σ_k f_{k−1} (−q)^k (1+q)^{d−k} / (1+q)^d` with
/// `d = dim L + 1`, from the f-vector.
pub fn weighted_euler_uniform(l: &Complex) -> RationalFunction {
    let mut f = vec![1usize];
    f.extend(l.f_vector());
    let d = f.len() - 1;
    let one_plus = Poly::from_ints(&[1, 1]);
    let minus_q = Poly::from_ints(&[0, -1]);
    let num = f.iter().enumerate().fold(Poly::default(), |acc, (k, &fk)| {
        acc.add(
            &minus_q
                .pow(k)
                .mul(&one_plus.pow(d - k))
                .scale(&q_int(fk as i64)),
        )
    });
    RationalFunction::new(num, one_plus.pow(d)).expect("(1+q)^d is nonzero")
}

/// `(−1)^n χ_{1/q}(L)` for the duality comparison, `n = dim L + 1`.
pub fn dual_euler(l: &Complex, q: &WeightAssignment) -> Result<Q> {
    let chi = weighted_euler(l, &q.inverse())?;
    let n = l.dim() + 1;
    Ok(if n % 2 == 0 { chi } else { -chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cycle, join, subdivided_boundary};
    use crate::rational::{q_frac, q_int};
    use num_traits::Zero;

    fn point() -> Complex {
        Complex::from_named(&["a"], &[vec!["a"]], None).unwrap()
    }

    #[test]
    fn closed_forms() {
        let q = WeightAssignment::uniform(1, q_frac(1, 3)).unwrap();
        assert_eq!(weighted_euler(&point(), &q).unwrap(), q_frac(3, 4));
        let hex = weighted_euler_uniform(&cycle(6).unwrap());
        assert_eq!(hex.numerator(), &Poly::from_ints(&[1, -4, 1]));
        assert_eq!(hex.denominator(), &Poly::from_ints(&[1, 2, 1]));
        let b3 = subdivided_boundary(3).unwrap();
        assert!(
            weighted_euler(&b3, &WeightAssignment::uniform(14, q_int(1)).unwrap())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn join_is_multiplicative() {
        let a = cycle(5).unwrap();
        let b = point();
        let j = join(&a, &b);
        let qa = WeightAssignment::new((1..=5).map(|i| q_frac(i, 7)).collect()).unwrap();
        let qb = WeightAssignment::uniform(1, q_frac(2, 3)).unwrap();
        let qj = WeightAssignment::new(qa.values().iter().chain(qb.values()).cloned().collect())
            .unwrap();
        let lhs = weighted_euler(&j, &qj).unwrap();
        assert_eq!(
            lhs,
            weighted_euler(&a, &qa).unwrap() * weighted_euler(&b, &qb).unwrap()
        );
    }

    #[test]
    fn hexagon_is_self_dual() {
        let hex = cycle(6).unwrap();
        let q = WeightAssignment::uniform(6, q_frac(2, 7)).unwrap();
        assert_eq!(
            weighted_euler(&hex, &q).unwrap(),
            dual_euler(&hex, &q).unwrap()
        );
    }
}
