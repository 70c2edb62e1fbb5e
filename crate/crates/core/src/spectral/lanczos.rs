use nalgebra::{DMatrix, SymmetricEigen};

use crate::davis::SymmetricOperator;
use crate::error::{Error, Result};

/// Discrete approximation of the spectral measure `⟨E(dλ) x, x⟩`.
#[derive(Clone, Debug, Default)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// Mass of the nodes in `[0, ε]` (nodes below zero count as zero
    /// eigenvalues).
    pub fn mass_below(&self, eps: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(&x, _)| x <= eps)
            .map(|(_, &w)| w)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_node(&self) -> f64 {
        self.nodes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// Gauss quadrature for the spectral measure of `start` from `steps`
/// Lanczos iterations. With `reorthogonalize` each new vector is made
/// orthogonal to all previous ones (twice); otherwise the three-term
/// recurrence is used as is, which keeps the quadrature accurate even
/// after orthogonality is lost.
pub fn lanczos_quadrature(
    op: &dyn SymmetricOperator,
    start: &[f64],
    steps: usize,
    reorthogonalize: bool,
) -> Result<Quadrature> {
    let n = op.dim();
    let norm2 = dot(start, start);
    if norm2 == 0.0 || n == 0 {
        return Ok(Quadrature::default());
    }
    let steps = steps.min(n).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut v: Vec<f64> = start.iter().map(|x| x / norm2.sqrt()).collect();
    let mut v_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut scale: f64 = 0.0;
    for j in 0..steps {
        op.apply(&v, &mut w);
        let a = dot(&w, &v);
        let b_prev = if j > 0 { beta[j - 1] } else { 0.0 };
        for i in 0..n {
            w[i] -= a * v[i] + b_prev * v_prev[i];
        }
        alpha.push(a);
        if reorthogonalize {
            basis.push(v.clone());
            for _ in 0..2 {
                for u in &basis {
                    let c = dot(&w, u);
                    w.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
                }
            }
        }
        let b = dot(&w, &w).sqrt();
        scale = scale.max(a.abs()).max(b);
        if !b.is_finite() || !a.is_finite() {
            return Err(Error::Eigen("non-finite Lanczos coefficient".into()));
        }
        if j + 1 == steps || b <= 1e-12 * scale.max(1.0) {
            break;
        }
        beta.push(b);
        std::mem::swap(&mut v_prev, &mut v);
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / b);
    }
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::try_new(t, 1e-14, 10_000)
        .ok_or_else(|| Error::Eigen("tridiagonal eigensolve".into()))?;
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..k)
        .map(|i| eig.eigenvectors[(0, i)].powi(2) * norm2)
        .collect();
    Ok(Quadrature { nodes, weights })
}

/// Full eigendecomposition of a small dense symmetric matrix.
pub fn dense_eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m, 1e-14, 100_000)
        .ok_or_else(|| Error::Eigen("dense eigensolve did not converge".into()))
}
