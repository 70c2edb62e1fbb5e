use serde::{Deserialize, Serialize};

use super::estimate::{vn_betti_estimate, BettiEstimate, EstimatorOptions, Truncation};
use crate::complexes::{is_ghs, Complex};
use crate::davis::{BoundaryCondition, Restriction, DEFAULT_MAX_CELLS};
use crate::error::Result;
use crate::invariants::{
    cell_tolerance, duality_check, euler_consistency, euler_growth_identity, kunneth_check,
    trace_euler_identity, IdentityCheck, BASE_TOLERANCE,
};
use crate::racg::{CoxeterSystem, WeightAssignment};

/// Grid of a sweep: every `(radius, q, bc, degree)` combination is a cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepGrid {
    /// Weight specs as accepted by [`WeightAssignment::parse`].
    pub q: Vec<String>,
    /// Degrees to estimate; all of `0..=dim L + 1` when absent.
    pub degrees: Option<Vec<usize>>,
    pub radii: Vec<usize>,
    pub bcs: Vec<BoundaryCondition>,
    pub options: EstimatorOptions,
    pub max_cells: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            q: vec!["1".into()],
            degrees: None,
            radii: vec![4],
            bcs: vec![BoundaryCondition::Neumann, BoundaryCondition::Dirichlet],
            options: EstimatorOptions::default(),
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

/// One `(q, R, bc, degree)` job.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCell {
    pub q: String,
    pub radius: usize,
    pub bc: BoundaryCondition,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<BettiEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Monotone in ε and within `[0, dim_chamber]`.
    pub sane: bool,
    /// ε above the spectrum reproduces the chamber dimension to 1e-9.
    pub trace_identity: bool,
    /// `|neumann − dirichlet|` at the plateau, when both were run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<f64>,
    pub tolerance: f64,
    /// Disagreement above the base tolerance.
    pub non_convergent: bool,
}

impl SweepCell {
    pub fn value(&self) -> Option<f64> {
        self.estimate.as_ref().map(BettiEstimate::value)
    }
}

/// Estimates over a grid with the identities checked against them.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub complex: String,
    pub vertices: usize,
    pub dim: isize,
    pub cells: Vec<SweepCell>,
    /// Exact identities at each grid weight.
    pub exact_checks: Vec<IdentityCheck>,
    pub euler_checks: Vec<IdentityCheck>,
    pub duality_checks: Vec<IdentityCheck>,
    pub kunneth_checks: Vec<IdentityCheck>,
}

impl SweepReport {
    pub fn cell(
        &self,
        q: &str,
        radius: usize,
        bc: BoundaryCondition,
        degree: usize,
    ) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.q == q && c.radius == radius && c.bc == bc && c.degree == degree)
    }

    pub fn checks(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.exact_checks
            .iter()
            .chain(&self.euler_checks)
            .chain(&self.duality_checks)
            .chain(&self.kunneth_checks)
    }

    /// Cells without an estimate.
    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.estimate.is_none()).count()
    }

    /// Every estimate is sane, satisfies the trace identity, and every
    /// check passed.
    pub fn all_passed(&self) -> bool {
        self.failed_cells() == 0
            && self.cells.iter().all(|c| c.sane && c.trace_identity)
            && self.checks().all(|c| c.status.passed())
    }
}

/// Runs every cell of `grid` on `l`. Cell failures are recorded in the
/// report; only an invalid complex or weight spec is an error.
pub fn sweep(name: &str, l: &Complex, grid: &SweepGrid) -> Result<SweepReport> {
    let sys = CoxeterSystem::from_complex(l)?;
    let weights: Vec<(String, WeightAssignment)> = grid
        .q
        .iter()
        .map(|text| WeightAssignment::parse(&sys, text).map(|w| (w.describe(&sys), w)))
        .collect::<Result<_>>()?;
    let top = (l.dim() + 1).max(0) as usize;
    let degrees: Vec<usize> = grid.degrees.clone().unwrap_or_else(|| (0..=top).collect());
    let mut report = SweepReport {
        complex: name.into(),
        vertices: l.vertex_count(),
        dim: l.dim(),
        ..Default::default()
    };
    for &radius in &grid.radii {
        let truncation = Truncation::with_budget(l, radius, grid.max_cells);
        for (qs, w) in &weights {
            for &bc in &grid.bcs {
                let wc = truncation
                    .as_ref()
                    .map_err(|e| e.to_string())
                    .and_then(|t| {
                        t.assemble(w, bc, Restriction::Full)
                            .map_err(|e| e.to_string())
                    });
                for &degree in &degrees {
                    let est = wc.as_ref().map_err(Clone::clone).and_then(|wc| {
                        vn_betti_estimate(wc, degree, &grid.options).map_err(|e| e.to_string())
                    });
                    report.cells.push(make_cell(qs, radius, bc, degree, est));
                }
            }
        }
    }
    mark_disagreement(&mut report.cells);
    attach_checks(name, l, &mut report, &grid.q)?;
    Ok(report)
}

/// Recomputes the exact, Euler and duality checks of a report from its
/// cells. `q` lists the weight specs of the grid.
pub fn attach_checks(
    name: &str,
    l: &Complex,
    report: &mut SweepReport,
    q: &[String],
) -> Result<()> {
    let sys = CoxeterSystem::from_complex(l)?;
    let weights: Vec<(String, WeightAssignment)> = q
        .iter()
        .map(|text| WeightAssignment::parse(&sys, text).map(|w| (w.describe(&sys), w)))
        .collect::<Result<_>>()?;
    let top = (l.dim() + 1).max(0) as usize;
    report.exact_checks.clear();
    report.euler_checks.clear();
    report.duality_checks.clear();
    for (_, w) in &weights {
        report.exact_checks.push(euler_growth_identity(name, l, w)?);
        report.exact_checks.push(trace_euler_identity(name, l, w)?);
    }

    let mut groups: Vec<(String, usize, BoundaryCondition)> = Vec::new();
    for c in &report.cells {
        let key = (c.q.clone(), c.radius, c.bc);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (qs, radius, bc) in &groups {
        let cells: Vec<&SweepCell> = report
            .cells
            .iter()
            .filter(|c| &c.q == qs && c.radius == *radius && c.bc == *bc)
            .collect();
        let covered =
            (0..=top).all(|i| cells.iter().any(|c| c.degree == i && c.estimate.is_some()));
        if !covered {
            continue;
        }
        let estimates: Vec<BettiEstimate> =
            cells.iter().filter_map(|c| c.estimate.clone()).collect();
        let tol = cells
            .iter()
            .map(|c| c.tolerance)
            .fold(BASE_TOLERANCE, f64::max);
        let Some((_, w)) = weights.iter().find(|(k, _)| k == qs) else {
            continue;
        };
        report
            .euler_checks
            .push(euler_consistency(name, l, w, &estimates, tol)?);
    }

    if l.is_flag() && is_ghs(l).verdict {
        for (qs, w) in &weights {
            let inv = w.inverse();
            let inv_key = inv.describe(&sys);
            let paired = weights.iter().any(|(k, _)| *k == inv_key);
            // each pair {q, 1/q} is compared once
            if paired && inv_key < *qs {
                continue;
            }
            let mut done_exact = false;
            for (_, radius, bc) in groups.iter().filter(|g| &g.0 == qs) {
                let at = |key: &str| -> Vec<&SweepCell> {
                    report
                        .cells
                        .iter()
                        .filter(|c| c.q == key && c.radius == *radius && c.bc == *bc)
                        .collect()
                };
                let here = at(qs);
                let there = if paired { at(&inv_key) } else { Vec::new() };
                let tol = here
                    .iter()
                    .chain(&there)
                    .map(|c| c.tolerance)
                    .fold(BASE_TOLERANCE, f64::max);
                let e1: Vec<BettiEstimate> =
                    here.iter().filter_map(|c| c.estimate.clone()).collect();
                let e2: Vec<BettiEstimate> =
                    there.iter().filter_map(|c| c.estimate.clone()).collect();
                let mut checks = duality_check(name, l, w, &e1, &e2, tol)?;
                if done_exact {
                    checks.remove(0);
                }
                done_exact = true;
                report.duality_checks.extend(checks);
            }
            if !done_exact {
                report
                    .duality_checks
                    .extend(duality_check(name, l, w, &[], &[], BASE_TOLERANCE)?);
            }
        }
    }
    Ok(())
}

fn make_cell(
    q: &str,
    radius: usize,
    bc: BoundaryCondition,
    degree: usize,
    est: std::result::Result<BettiEstimate, String>,
) -> SweepCell {
    let (estimate, error) = match est {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e)),
    };
    let sane = estimate.as_ref().is_some_and(|e| e.is_sane(1e-9));
    let trace_identity = estimate
        .as_ref()
        .is_some_and(|e| e.trace_identity_holds(1e-9));
    SweepCell {
        q: q.into(),
        radius,
        bc,
        degree,
        estimate,
        error,
        sane,
        trace_identity,
        disagreement: None,
        tolerance: BASE_TOLERANCE,
        non_convergent: false,
    }
}

/// Pairs Neumann and Dirichlet cells and sets their tolerance to
/// `max(0.02, 2 × disagreement)`.
fn mark_disagreement(cells: &mut [SweepCell]) {
    for i in 0..cells.len() {
        if cells[i].bc != BoundaryCondition::Neumann {
            continue;
        }
        let partner = cells.iter().position(|c| {
            c.bc == BoundaryCondition::Dirichlet
                && c.q == cells[i].q
                && c.radius == cells[i].radius
                && c.degree == cells[i].degree
        });
        let (Some(j), Some(n)) = (partner, cells[i].value()) else {
            continue;
        };
        let Some(d) = cells[j].value() else { continue };
        let gap = (n - d).abs();
        for k in [i, j] {
            cells[k].disagreement = Some(gap);
            cells[k].tolerance = cell_tolerance(n, Some(d));
            cells[k].non_convergent = gap > BASE_TOLERANCE;
        }
    }
}

/// Attaches Künneth checks to the report of a join, matching cells of the
/// factor reports by weight spec, radius and boundary condition.
pub fn attach_kunneth(
    joined: &mut SweepReport,
    first: &SweepReport,
    second: &SweepReport,
) -> Result<()> {
    let mut keys: Vec<(String, usize, BoundaryCondition)> = Vec::new();
    for c in &joined.cells {
        let key = (c.q.clone(), c.radius, c.bc);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    for (q, radius, bc) in keys {
        let pick = |r: &SweepReport| -> Vec<BettiEstimate> {
            r.cells
                .iter()
                .filter(|c| c.q == q && c.radius == radius && c.bc == bc)
                .filter_map(|c| c.estimate.clone())
                .collect()
        };
        let (a, b, j) = (pick(first), pick(second), pick(joined));
        if a.is_empty() || b.is_empty() || j.is_empty() {
            continue;
        }
        let tol = joined
            .cells
            .iter()
            .filter(|c| c.q == q && c.radius == radius && c.bc == bc)
            .map(|c| c.tolerance)
            .fold(BASE_TOLERANCE, f64::max);
        let checks = kunneth_check(&joined.complex, &a, &b, &j, tol)?;
        joined
            .kunneth_checks
            .extend(checks.into_iter().map(|mut c| {
                c.context.q = q.clone();
                c
            }));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{boundary_simplex, cycle};
    use crate::invariants::CheckStatus;

    #[test]
    fn dihedral_sweep_passes() {
        let l = boundary_simplex(1).unwrap();
        let grid = SweepGrid {
            q: vec!["1/2".into(), "2".into()],
            radii: vec![16],
            ..Default::default()
        };
        let r = sweep("dihedral", &l, &grid).unwrap();
        assert_eq!(r.cells.len(), 2 * 2 * 2);
        assert!(r.cells.iter().all(|c| c.sane && c.trace_identity));
        let b0 = r
            .cell("1/2", 16, BoundaryCondition::Neumann, 0)
            .unwrap()
            .value()
            .unwrap();
        assert!((b0 - 1.0 / 3.0).abs() < 0.03, "{b0}");
        assert!(r
            .euler_checks
            .iter()
            .any(|c| c.context.q == "1/2" && c.status == CheckStatus::NumericPass));
        assert!(r
            .exact_checks
            .iter()
            .all(|c| c.status == CheckStatus::ExactPass));
        // the dihedral group is a flag GHS^0, so q=1/2 pairs with q=2
        assert!(r.duality_checks.iter().any(|c| c.name == "duality-betti"));
    }

    #[test]
    fn failures_are_recorded() {
        let l = cycle(6).unwrap();
        let grid = SweepGrid {
            radii: vec![6],
            max_cells: 10,
            ..Default::default()
        };
        let r = sweep("hex", &l, &grid).unwrap();
        assert!(r.cells.iter().all(|c| c.error.is_some()));
        assert!(!r.all_passed());
    }
}
