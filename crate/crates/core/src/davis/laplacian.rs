use nalgebra::DMatrix;

use super::sparse::Csr;

/// A real symmetric operator given by its action on vectors.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// `S_k = D_k^T D_k + D_{k−1} D_{k−1}^T` with `D_j` the symmetrized
/// coboundaries; unitarily equivalent to the weighted Hodge Laplacian.
#[derive(Clone, Debug)]
pub struct Laplacian {
    n: usize,
    up: Option<(Csr<f64>, Csr<f64>)>,
    down: Option<(Csr<f64>, Csr<f64>)>,
}

impl Laplacian {
    /// `up = D_k`, `down = D_{k−1}`.
    pub fn new(n: usize, up: Option<Csr<f64>>, down: Option<Csr<f64>>) -> Self {
        let pair = |m: Csr<f64>| {
            let t = m.transpose();
            (m, t)
        };
        Laplacian {
            n,
            up: up.map(pair),
            down: down.map(pair),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.n, self.n);
        if let Some((d, _)) = &self.up {
            let m = d.to_dense();
            s += m.transpose() * m;
        }
        if let Some((d, _)) = &self.down {
            let m = d.to_dense();
            s += &m * m.transpose();
        }
        s
    }

    /// Largest absolute row sum, an upper bound for the spectrum.
    pub fn gershgorin_bound(&self) -> f64 {
        let mut e = vec![0.0; self.n];
        let mut y = vec![0.0; self.n];
        let mut bound: f64 = 0.0;
        // |S| row sums are bounded by those of |D|^T|D| + |D||D|^T
        let abs = |m: &Csr<f64>| m.map(|_, _, v| v.abs());
        let ones = vec![1.0; self.n];
        if let Some((d, dt)) = &self.up {
            let (a, at) = (abs(d), abs(dt));
            let mut tmp = vec![0.0; a.nrows];
            a.matvec(&ones, &mut tmp);
            at.matvec(&tmp, &mut y);
            e.iter_mut().zip(&y).for_each(|(a, b)| *a += b);
        }
        if let Some((d, dt)) = &self.down {
            let (a, at) = (abs(d), abs(dt));
            let mut tmp = vec![0.0; at.nrows];
            at.matvec(&ones, &mut tmp);
            a.matvec(&tmp, &mut y);
            e.iter_mut().zip(&y).for_each(|(a, b)| *a += b);
        }
        for v in e {
            bound = bound.max(v);
        }
        bound
    }
}

impl SymmetricOperator for Laplacian {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        if let Some((d, dt)) = &self.up {
            let mut tmp = vec![0.0; d.nrows];
            d.matvec(x, &mut tmp);
            dt.matvec(&tmp, y);
        }
        if let Some((d, dt)) = &self.down {
            let mut tmp = vec![0.0; dt.nrows];
            dt.matvec(x, &mut tmp);
            let mut z = vec![0.0; self.n];
            d.matvec(&tmp, &mut z);
            y.iter_mut().zip(z).for_each(|(a, b)| *a += b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_matvec_agree() {
        let d = Csr::from_rows(2, vec![vec![(0, -1.0), (1, 2.0)]]);
        let l = Laplacian::new(2, Some(d), None);
        let m = l.to_dense();
        let mut y = vec![0.0; 2];
        l.apply(&[1.0, 1.0], &mut y);
        assert_eq!(y, vec![m[(0, 0)] + m[(0, 1)], m[(1, 0)] + m[(1, 1)]]);
        assert_eq!(m[(1, 1)], 4.0);
        assert!(l.gershgorin_bound() >= 5.0 - 1e-12);
    }
}
