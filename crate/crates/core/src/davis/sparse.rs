use rayon::prelude::*;

/// Rows above this count are processed in parallel.
const PAR_ROWS: usize = 4096;

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub values: Vec<T>,
}

impl<T: Copy + Send + Sync> Csr<T> {
    pub fn empty(nrows: usize, ncols: usize) -> Self {
        Csr {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from per-row entry lists.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(u32, T)>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        indptr.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        let nrows = rows.len();
        for row in rows {
            for (c, v) in row {
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Csr {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .zip(&self.values[span])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.ncols {
            counts[i + 1] += counts[i];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0u32; self.nnz()];
        let mut values = self.values.clone();
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                let slot = next[c];
                indices[slot] = r as u32;
                values[slot] = v;
                next[c] += 1;
            }
        }
        Csr {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr,
            indices,
            values,
        }
    }

    /// Keeps the listed rows and columns (in the given order), dropping
    /// entries in removed columns.
    pub fn select(&self, rows: &[u32], cols_keep: &[u32]) -> Self {
        let mut remap = vec![u32::MAX; self.ncols];
        for (new, &old) in cols_keep.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let kept: Vec<Vec<(u32, T)>> = rows
            .iter()
            .map(|&r| {
                self.row(r as usize)
                    .filter_map(|(c, v)| (remap[c] != u32::MAX).then_some((remap[c], v)))
                    .collect()
            })
            .collect();
        Csr::from_rows(cols_keep.len(), kept)
    }

    pub fn map<U: Copy + Send + Sync>(&self, f: impl Fn(usize, usize, T) -> U) -> Csr<U> {
        let mut values = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                values.push(f(r, c, v));
            }
        }
        Csr {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values,
        }
    }
}

impl Csr<f64> {
    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        let row = |r: usize| -> f64 {
            let span = self.indptr[r]..self.indptr[r + 1];
            self.indices[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&c, &v)| v * x[c as usize])
                .sum()
        };
        if self.nrows >= PAR_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(r, out)| *out = row(r));
        } else {
            y.iter_mut().enumerate().for_each(|(r, out)| *out = row(r));
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

impl Csr<i8> {
    /// Whether `self · other` vanishes, computed exactly in integers.
    pub fn product_is_zero(&self, other: &Csr<i8>) -> bool {
        assert_eq!(self.ncols, other.nrows);
        (0..self.nrows).into_par_iter().all(|r| {
            let mut acc: Vec<(usize, i64)> = Vec::new();
            for (m, a) in self.row(r) {
                for (c, b) in other.row(m) {
                    match acc.iter_mut().find(|(k, _)| *k == c) {
                        Some(e) => e.1 += a as i64 * b as i64,
                        None => acc.push((c, a as i64 * b as i64)),
                    }
                }
            }
            acc.iter().all(|&(_, v)| v == 0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_matvec() {
        let a = Csr::from_rows(3, vec![vec![(0, 1.0), (2, 2.0)], vec![(1, -1.0)]]);
        let t = a.transpose();
        assert_eq!((t.nrows, t.ncols), (3, 2));
        let mut y = vec![0.0; 3];
        t.matvec(&[1.0, 10.0], &mut y);
        assert_eq!(y, vec![1.0, -10.0, 2.0]);
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn select_and_exact_product() {
        let d0: Csr<i8> = Csr::from_rows(2, vec![vec![(0, -1), (1, 1)]]);
        let s = d0.select(&[0], &[1]);
        assert_eq!(s.values, vec![1]);
        let z: Csr<i8> = Csr::empty(1, 1);
        assert!(z.product_is_zero(&Csr::from_rows(2, vec![vec![(0, 1)]])));
        assert!(!Csr::from_rows(1, vec![vec![(0, 1i8)]]).product_is_zero(&d0));
    }
}
