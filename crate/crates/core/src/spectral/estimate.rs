use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lanczos::{dense_eigen, lanczos_quadrature, Quadrature};
use crate::complexes::Complex;
use crate::davis::{
    BoundaryCondition, CubeCatalog, Restriction, SymmetricOperator, WeightedComplex,
    DEFAULT_MAX_CELLS,
};
use crate::error::Result;
use crate::racg::{Ball, CoxeterSystem, WeightAssignment, DEFAULT_MAX_ELEMENTS};

/// Thresholds `10^{-4}, 10^{-3.75}, …, 10^{-1}`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..13).map(|j| 10f64.powf(-4.0 + j as f64 / 4.0)).collect()
}

/// Knobs for [`vn_betti_estimate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorOptions {
    pub eps_grid: Vec<f64>,
    /// Full eigendecomposition at or below this many cells.
    pub dense_threshold: usize,
    pub lanczos_steps: usize,
    /// Reorthogonalize Lanczos vectors while `cells × steps` stays below
    /// this.
    pub reorth_limit: usize,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            eps_grid: default_eps_grid(),
            dense_threshold: 2000,
            lanczos_steps: 300,
            reorth_limit: 2_000_000,
        }
    }
}

/// Selected threshold and the spread of the estimate around it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Plateau {
    pub index: usize,
    pub eps: f64,
    pub value: f64,
    /// `max − min` of the estimate over the grid window around `index`.
    pub flatness: f64,
}

/// Estimate of one weighted L²-Betti number from a truncation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiEstimate {
    pub degree: usize,
    pub q: Vec<f64>,
    pub radius: usize,
    pub bc: BoundaryCondition,
    pub eps_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub plateau: Plateau,
    /// `Σ_{|T|=i} Π q_v/(1+q_v)` over identity types present.
    pub dim_chamber: f64,
    /// The estimate with the threshold above the whole spectrum.
    pub trace_at_max: f64,
    pub cells: usize,
    pub method: String,
    /// Smallest eigenvalue (dense) or Ritz value (Lanczos) seen.
    pub min_eigenvalue: f64,
    /// Set when some `q_v > 1`: truncation error is uncontrolled there.
    pub experimental: bool,
}

impl BettiEstimate {
    pub fn value(&self) -> f64 {
        self.plateau.value
    }

    /// Nondecreasing in ε and within `[0, dim_chamber]`, up to `tol`.
    pub fn is_sane(&self, tol: f64) -> bool {
        let mono = self.values.windows(2).all(|w| w[1] >= w[0] - tol);
        let bounded = self
            .values
            .iter()
            .all(|&v| v >= -tol && v <= self.dim_chamber + tol);
        mono && bounded
    }

    pub fn trace_identity_holds(&self, tol: f64) -> bool {
        (self.trace_at_max - self.dim_chamber).abs() <= tol
    }
}

/// Picks the grid point whose three-point window has the smallest spread;
/// ties go to the smaller threshold.
pub fn select_plateau(eps: &[f64], values: &[f64]) -> Plateau {
    let n = values.len();
    if n == 0 {
        return Plateau {
            index: 0,
            eps: 0.0,
            value: 0.0,
            flatness: 0.0,
        };
    }
    let spread = |j: usize| {
        let w = &values[j.saturating_sub(1)..(j + 2).min(n)];
        w.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - w.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let candidates: Vec<usize> = if n >= 3 {
        (1..n - 1).collect()
    } else {
        (0..n).collect()
    };
    let mut best = candidates[0];
    for &j in &candidates {
        if spread(j) < spread(best) - 1e-12 {
            best = j;
        }
    }
    Plateau {
        index: best,
        eps: eps[best],
        value: values[best],
        flatness: spread(best),
    }
}

/// `b̂(ε) = Σ_T c_T ⟨P_{[0,ε]} e_T, e_T⟩` over the identity cells of
/// degree `i`, with `c_T = Π_{v∈T} q_v/(1+q_v)`.
pub fn vn_betti_estimate(
    wc: &WeightedComplex,
    i: usize,
    opts: &EstimatorOptions,
) -> Result<BettiEstimate> {
    let cells = wc.identity_cells(i)?;
    let lap = wc.laplacian(i)?;
    let n = lap.dim();
    let eps = opts.eps_grid.clone();
    let mut values = vec![0.0; eps.len()];
    let mut trace_at_max = 0.0;
    let mut min_eigenvalue = f64::INFINITY;
    let method;
    if n <= opts.dense_threshold {
        method = "dense".to_string();
        if n > 0 {
            let eig = dense_eigen(lap.to_dense())?;
            min_eigenvalue = eig.eigenvalues.min();
            for &(idx, c) in &cells {
                let q = Quadrature {
                    nodes: eig.eigenvalues.iter().copied().collect(),
                    weights: (0..n).map(|j| eig.eigenvectors[(idx, j)].powi(2)).collect(),
                };
                accumulate(&q, c, &eps, &mut values, &mut trace_at_max);
            }
        }
    } else {
        let reorth = n.saturating_mul(opts.lanczos_steps) <= opts.reorth_limit;
        method = format!(
            "lanczos({}{})",
            opts.lanczos_steps,
            if reorth { ", reorthogonalized" } else { "" }
        );
        let quads: Vec<Quadrature> = cells
            .par_iter()
            .map(|&(idx, _)| {
                let mut start = vec![0.0; n];
                start[idx] = 1.0;
                lanczos_quadrature(&lap, &start, opts.lanczos_steps, reorth)
            })
            .collect::<Result<_>>()?;
        for (q, &(_, c)) in quads.iter().zip(&cells) {
            min_eigenvalue = min_eigenvalue.min(q.min_node());
            accumulate(q, c, &eps, &mut values, &mut trace_at_max);
        }
    }
    let plateau = select_plateau(&eps, &values);
    Ok(BettiEstimate {
        degree: i,
        q: wc.q.clone(),
        radius: wc.radius,
        bc: wc.bc,
        eps_grid: eps,
        values,
        plateau,
        dim_chamber: wc.chamber_dimension(i),
        trace_at_max,
        cells: n,
        method,
        min_eigenvalue: if min_eigenvalue.is_finite() {
            min_eigenvalue
        } else {
            0.0
        },
        experimental: wc.q.iter().any(|&x| x > 1.0),
    })
}

fn accumulate(q: &Quadrature, c: f64, eps: &[f64], values: &mut [f64], total: &mut f64) {
    for (v, &e) in values.iter_mut().zip(eps) {
        *v += c * q.mass_below(e);
    }
    *total += c * q.total();
}

/// Estimates for every degree of a truncation.
pub fn estimate_all(wc: &WeightedComplex, opts: &EstimatorOptions) -> Result<Vec<BettiEstimate>> {
    (0..=wc.top_dim())
        .map(|i| vn_betti_estimate(wc, i, opts))
        .collect()
}

/// Everything needed to estimate on one truncation of `Σ_L`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub catalog: CubeCatalog,
}

impl Truncation {
    pub fn new(l: &Complex, radius: usize) -> Result<Self> {
        Self::with_budget(l, radius, DEFAULT_MAX_CELLS)
    }

    /// Fails with [`crate::Error::Budget`] when the catalog would exceed
    /// `max_cells` cubes.
    pub fn with_budget(l: &Complex, radius: usize, max_cells: usize) -> Result<Self> {
        let sys = CoxeterSystem::from_complex(l)?;
        let ball = Ball::with_budget(&sys, radius, max_cells.min(DEFAULT_MAX_ELEMENTS))?;
        Ok(Truncation {
            catalog: CubeCatalog::with_budget(ball, max_cells)?,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.catalog.system()
    }

    pub fn assemble(
        &self,
        q: &WeightAssignment,
        bc: BoundaryCondition,
        r: Restriction,
    ) -> Result<WeightedComplex> {
        WeightedComplex::assemble(&self.catalog, q, bc, r)
    }

    pub fn estimate(
        &self,
        q: &WeightAssignment,
        bc: BoundaryCondition,
        r: Restriction,
        degrees: &[usize],
        opts: &EstimatorOptions,
    ) -> Result<Vec<BettiEstimate>> {
        let wc = self.assemble(q, bc, r)?;
        degrees
            .iter()
            .map(|&i| vn_betti_estimate(&wc, i, opts))
            .collect()
    }
}

/// `b̂^i_q(L, A)`: estimate on the pair `(Σ_L, W_L Σ_A)`.
pub fn relative_estimate(
    l: &Complex,
    a: &Complex,
    q: &WeightAssignment,
    i: usize,
    radius: usize,
    bc: BoundaryCondition,
    opts: &EstimatorOptions,
) -> Result<BettiEstimate> {
    let r = Restriction::pair(l, a)?;
    let t = Truncation::new(l, radius)?;
    vn_betti_estimate(&t.assemble(q, bc, r)?, i, opts)
}

/// `b̂^i_q(A)` in the `W_L`-ambient sense: estimate on `W_L Σ_A`.
pub fn subcomplex_estimate(
    l: &Complex,
    a: &Complex,
    q: &WeightAssignment,
    i: usize,
    radius: usize,
    bc: BoundaryCondition,
    opts: &EstimatorOptions,
) -> Result<BettiEstimate> {
    let r = Restriction::subcomplex(l, a)?;
    let t = Truncation::new(l, radius)?;
    vn_betti_estimate(&t.assemble(q, bc, r)?, i, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::boundary_simplex;
    use crate::rational::{q_frac, q_int};

    fn point() -> Complex {
        Complex::from_named(&["a"], &[vec!["a"]], None).unwrap()
    }

    #[test]
    fn point_is_exact() {
        for (q, r) in [(q_frac(1, 3), 1), (q_int(1), 2), (q_int(3), 4)] {
            let t = Truncation::new(&point(), r).unwrap();
            let w = WeightAssignment::uniform(1, q.clone()).unwrap();
            let est = t
                .estimate(
                    &w,
                    BoundaryCondition::Neumann,
                    Restriction::Full,
                    &[0, 1],
                    &Default::default(),
                )
                .unwrap();
            let qf = crate::rational::to_f64(&q);
            assert!(est[0]
                .values
                .iter()
                .all(|v| (v - 1.0 / (1.0 + qf)).abs() < 1e-9));
            assert!(est[1].values.iter().all(|v| v.abs() < 1e-9));
            assert!(est
                .iter()
                .all(|e| e.trace_identity_holds(1e-9) && e.is_sane(1e-12)));
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let l = boundary_simplex(1).unwrap();
        let t = Truncation::new(&l, 12).unwrap();
        let w = WeightAssignment::uniform(2, q_frac(1, 2)).unwrap();
        let wc = t
            .assemble(&w, BoundaryCondition::Neumann, Restriction::Full)
            .unwrap();
        let dense = vn_betti_estimate(&wc, 0, &EstimatorOptions::default()).unwrap();
        let opts = EstimatorOptions {
            dense_threshold: 0,
            ..Default::default()
        };
        let lz = vn_betti_estimate(&wc, 0, &opts).unwrap();
        for (a, b) in dense.values.iter().zip(&lz.values) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(lz.method.starts_with("lanczos"));
    }

    #[test]
    fn plateau_prefers_flat_small_thresholds() {
        let eps = default_eps_grid();
        let mut v = vec![0.1; 13];
        for (j, x) in v.iter_mut().enumerate().skip(7) {
            *x = 0.1 + 0.01 * j as f64;
        }
        let p = select_plateau(&eps, &v);
        assert_eq!((p.index, p.flatness), (1, 0.0));
    }
}
