use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::system::{members, CoxeterSystem};
use super::weights::WeightAssignment;
use crate::error::{Error, Result};
use crate::rational::{q_int, Q};

/// Polynomial with rational coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q_int(x)).collect())
    }

    pub fn constant(x: Q) -> Self {
        Self::new(vec![x])
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, x: &Q) -> Poly {
        Poly::new(self.c.iter().map(|a| a * x).collect())
    }

    pub fn pow(&self, n: usize) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        let mut q = vec![Q::zero(); self.c.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] / &lead;
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] -= &f * dj;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.c.last().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + crate::rational::to_f64(a))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = *a < Q::zero();
            let mag = if neg { -a.clone() } else { a.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show = k == 0 || !mag.is_one();
            match (show, k) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}q")?,
                (false, 1) => write!(f, "q")?,
                (true, k) => write!(f, "{mag}q^{k}")?,
                (false, k) => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of polynomials in lowest terms; the denominator is normalized
/// to constant term 1 when that is nonzero, otherwise to be monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Pole);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if num.is_zero() {
            den = Poly::one();
        }
        let norm = if !den.coeff(0).is_zero() {
            den.coeff(0)
        } else {
            den.c.last().cloned().unwrap()
        };
        let inv = norm.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn reciprocal(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// First `n + 1` power-series coefficients about `q = 0`.
    pub fn taylor(&self, n: usize) -> Result<Vec<Q>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Pole);
        }
        let mut out: Vec<Q> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.num.coeff(k);
            for j in 1..=k.min(self.den.c.len().saturating_sub(1)) {
                acc -= self.den.coeff(j) * &out[k - j];
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> RationalFunctionJson {
        let strs = |p: &Poly| p.c.iter().map(|x| x.to_string()).collect();
        RationalFunctionJson {
            numerator: strs(&self.num),
            denominator: strs(&self.den),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Coefficient lists, lowest degree first, as exact rational strings.
#[derive(Clone, Debug, Serialize)]
pub struct RationalFunctionJson {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

/// Number of spherical sets of each size.
pub fn spherical_counts(sys: &CoxeterSystem) -> Vec<usize> {
    let mut c = vec![0; sys.max_spherical() + 1];
    for t in sys.spherical_sets() {
        c[t.count_ones() as usize] += 1;
    }
    c
}

/// Uniform growth series `W(q)`, from
/// `1/W(q) = Σ_T (−q/(1+q))^{|T|} = Σ_k c_k (−q)^k (1+q)^{d−k} / (1+q)^d`.
pub fn growth_series(sys: &CoxeterSystem) -> RationalFunction {
    let c = spherical_counts(sys);
    let d = c.len() - 1;
    let one_plus = Poly::from_ints(&[1, 1]);
    let minus_q = Poly::from_ints(&[0, -1]);
    let mut num = Poly::default();
    for (k, &ck) in c.iter().enumerate() {
        let term = minus_q
            .pow(k)
            .mul(&one_plus.pow(d - k))
            .scale(&q_int(ck as i64));
        num = num.add(&term);
    }
    RationalFunction::new(one_plus.pow(d), num).expect("constant term of 1/W is 1")
}

/// `1/W(q)` evaluated exactly at a (possibly non-uniform) point.
pub fn inverse_growth_at(sys: &CoxeterSystem, q: &WeightAssignment) -> Q {
    sys.spherical_sets()
        .iter()
        .map(|&t| {
            members(t).fold(Q::one(), |acc, s| {
                let qs = q.get(s);
                -acc * qs / (Q::one() + qs)
            })
        })
        .fold(Q::zero(), |a, b| a + b)
}

/// `W(q)` at a point; a pole (outside the region of convergence) is an
/// error.
pub fn growth_at(sys: &CoxeterSystem, q: &WeightAssignment) -> Result<Q> {
    let inv = inverse_growth_at(sys, q);
    if inv.is_zero() {
        return Err(Error::Pole);
    }
    Ok(inv.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::racg::Ball;
    use crate::rational::q_frac;

    fn names(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    }

    #[test]
    fn small_growth_series() {
        let one = CoxeterSystem::from_graph(names(1), &[]).unwrap();
        let w = growth_series(&one);
        assert_eq!(
            (w.numerator(), w.denominator()),
            (&Poly::from_ints(&[1, 1]), &Poly::one())
        );
        let d = CoxeterSystem::from_graph(names(2), &[]).unwrap();
        let w = growth_series(&d);
        assert_eq!(
            (w.numerator(), w.denominator()),
            (&Poly::from_ints(&[1, 1]), &Poly::from_ints(&[1, -1]))
        );
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let h = CoxeterSystem::from_graph(names(6), &edges).unwrap();
        let inv = growth_series(&h).reciprocal().unwrap();
        assert_eq!(inv.numerator(), &Poly::from_ints(&[1, -4, 1]));
        assert_eq!(inv.denominator(), &Poly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn taylor_matches_shells() {
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let h = CoxeterSystem::from_graph(names(6), &edges).unwrap();
        let t = growth_series(&h).taylor(6).unwrap();
        let shells = Ball::new(&h, 6).unwrap().shell_sizes();
        assert_eq!(
            t,
            shells.iter().map(|&n| q_int(n as i64)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn point_evaluation() {
        let d = CoxeterSystem::from_graph(names(2), &[]).unwrap();
        let q = WeightAssignment::uniform(2, q_frac(1, 2)).unwrap();
        assert_eq!(growth_at(&d, &q).unwrap(), q_int(3));
        let one = WeightAssignment::uniform(2, q_int(1)).unwrap();
        assert!(matches!(growth_at(&d, &one), Err(Error::Pole)));
    }

    #[test]
    fn polynomial_arithmetic() {
        let a = Poly::from_ints(&[1, 2, 1]);
        let b = Poly::from_ints(&[1, 1]);
        assert_eq!(a.div_rem(&b), (b.clone(), Poly::default()));
        assert_eq!(a.gcd(&Poly::from_ints(&[-1, 0, 1])), b);
        assert_eq!(format!("{}", Poly::from_ints(&[1, -4, 1])), "1 - 4q + q^2");
    }
}
