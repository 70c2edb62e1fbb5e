use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::ComplexExpr;
use super::report::{Verdict, VerdictRow};
use crate::complexes::{odd_removal_chain, Complex, Tiebreak};
use crate::davis::{BoundaryCondition, DEFAULT_MAX_CELLS};
use crate::error::{Error, Result};
use crate::invariants::{
    cone_check, mayer_vietoris_check, widen_by_disagreement, CheckStatus, IdentityCheck,
    BASE_TOLERANCE,
};
use crate::racg::{CoxeterSystem, WeightAssignment};
use crate::rational::{parse_q, to_f64};
use crate::spectral::{
    attach_kunneth, sweep, EstimatorOptions, SweepGrid, SweepReport, Truncation,
};

/// A named experiment: one complex, a grid of cells, extra checks and
/// expected values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub complex: ComplexExpr,
    #[serde(default = "default_q")]
    pub q: Vec<String>,
    pub radii: Vec<usize>,
    #[serde(default = "default_bcs")]
    pub bcs: Vec<BoundaryCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default)]
    pub checks: ExtraChecks,
    #[serde(default)]
    pub expect: Vec<Expectation>,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub options: EstimatorOptions,
}

fn default_q() -> Vec<String> {
    vec!["1".into()]
}

fn default_bcs() -> Vec<BoundaryCondition> {
    vec![BoundaryCondition::Neumann, BoundaryCondition::Dirichlet]
}

/// Checks beyond the Euler and duality ones every sweep carries.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraChecks {
    /// Vertices at which to compare the star with the link, at the largest
    /// radius and every weight and boundary condition of the grid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cone: Vec<String>,
    /// Factors whose join is the scenario complex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kunneth: Option<(ComplexExpr, ComplexExpr)>,
    /// Number of odd-removal steps on which to test the Mayer–Vietoris
    /// inequality (graded complexes only).
    #[serde(default)]
    pub mayer_vietoris_steps: usize,
}

/// Caps applied before any heavy work starts.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    pub max_cells: usize,
    pub max_radius: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: DEFAULT_MAX_CELLS,
            max_radius: 64,
        }
    }
}

/// An expected plateau value of one cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// Row label in the verdict table.
    pub statement: String,
    pub q: String,
    pub degree: usize,
    /// Defaults to the largest radius of the scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default = "neumann")]
    pub bc: BoundaryCondition,
    /// Exact target, e.g. `"1/6"`.
    pub target: String,
    pub tolerance: f64,
    /// Only require `value ≤ target + tolerance`.
    #[serde(default)]
    pub at_most: bool,
}

fn neumann() -> BoundaryCondition {
    BoundaryCondition::Neumann
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks the grid against the budget and that every weight spec
    /// parses against the complex.
    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.q.is_empty() || self.bcs.is_empty() {
            return Err(Error::Config("q, radii and bcs must be nonempty".into()));
        }
        if let Some(&r) = self.radii.iter().find(|&&r| r > self.budget.max_radius) {
            return Err(Error::Config(format!(
                "radius {r} above the budget cap {}",
                self.budget.max_radius
            )));
        }
        for e in &self.expect {
            parse_q(&e.target)
                .map_err(|err| Error::Config(format!("expectation `{}`: {err}", e.statement)))?;
        }
        Ok(())
    }

    /// Builds the complex and checks the weight specs against it.
    pub fn build(&self, base: &Path) -> Result<Complex> {
        let l = self.complex.eval(base)?;
        let sys = CoxeterSystem::from_complex(&l).map_err(|e| Error::Config(e.to_string()))?;
        for q in &self.q {
            WeightAssignment::parse(&sys, q)
                .map_err(|e| Error::Config(format!("weight `{q}`: {e}")))?;
        }
        Ok(l)
    }

    pub fn grid(&self) -> SweepGrid {
        SweepGrid {
            q: self.q.clone(),
            degrees: self.degrees.clone(),
            radii: self.radii.clone(),
            bcs: self.bcs.clone(),
            options: self.options.clone(),
            max_cells: self.budget.max_cells,
        }
    }

    fn top_radius(&self) -> usize {
        *self.radii.iter().max().unwrap()
    }
}

/// Everything a scenario run produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub sweep: SweepReport,
    pub cone_checks: Vec<IdentityCheck>,
    pub mayer_vietoris_checks: Vec<IdentityCheck>,
    pub verdicts: Vec<VerdictRow>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn all_checks(&self) -> Vec<IdentityCheck> {
        self.sweep
            .checks()
            .chain(&self.cone_checks)
            .chain(&self.mayer_vietoris_checks)
            .cloned()
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict != Verdict::Fail)
    }
}

/// Runs a scenario. Configuration problems are errors; failures inside
/// single cells or checks end up in the report.
pub fn run(scenario: &Scenario, base: &Path) -> Result<RunReport> {
    scenario.validate()?;
    let l = scenario.build(base)?;
    let name = scenario.name.as_str();
    let mut report = sweep(name, &l, &scenario.grid())?;
    let mut notes = Vec::new();

    if let Some((a, b)) = &scenario.checks.kunneth {
        let (la, lb) = (a.eval(base)?, b.eval(base)?);
        let factor_grid = |c: &Complex| SweepGrid {
            degrees: Some((0..=(c.dim() + 1).max(0) as usize).collect()),
            ..scenario.grid()
        };
        let ra = sweep(&a.to_string(), &la, &factor_grid(&la))?;
        let rb = sweep(&b.to_string(), &lb, &factor_grid(&lb))?;
        attach_kunneth(&mut report, &ra, &rb)?;
    }

    let sys = CoxeterSystem::from_complex(&l)?;
    let radius = scenario.top_radius();
    let mut cone_checks = Vec::new();
    let mut mv_checks = Vec::new();
    let top = (l.dim() + 1).max(0) as usize;
    let needs_truncation =
        !scenario.checks.cone.is_empty() || scenario.checks.mayer_vietoris_steps > 0;
    let truncation = if needs_truncation {
        match Truncation::with_budget(&l, radius, scenario.budget.max_cells) {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("cone and Mayer–Vietoris checks skipped: {e}"));
                None
            }
        }
    } else {
        None
    };
    for q in scenario.q.iter().filter(|_| truncation.is_some()) {
        let t = truncation.as_ref().unwrap();
        let w = WeightAssignment::parse(&sys, q)?;
        for &bc in &scenario.bcs {
            for v in &scenario.checks.cone {
                match cone_check(
                    name,
                    t,
                    &l,
                    v,
                    &w,
                    &(0..=top).collect::<Vec<_>>(),
                    bc,
                    &scenario.options,
                    BASE_TOLERANCE,
                ) {
                    Ok(c) => cone_checks.extend(c),
                    Err(e) => notes.push(format!(
                        "cone check at `{v}` (q={q}, {bc}) failed to run: {e}"
                    )),
                }
            }
            if scenario.checks.mayer_vietoris_steps > 0 {
                match mayer_vietoris_steps(name, t, &l, &w, scenario, bc, top) {
                    Ok(c) => mv_checks.extend(c),
                    Err(e) => notes.push(format!(
                        "Mayer–Vietoris check (q={q}, {bc}) failed to run: {e}"
                    )),
                }
            }
        }
    }
    widen_by_disagreement(&mut cone_checks, false);
    widen_by_disagreement(&mut mv_checks, true);
    let non_convergent = report.cells.iter().filter(|c| c.non_convergent).count();
    if non_convergent > 0 {
        notes.push(format!(
            "{non_convergent} cells have Neumann/Dirichlet disagreement above {BASE_TOLERANCE}; their tolerances are widened"
        ));
    }
    if report
        .cells
        .iter()
        .any(|c| c.estimate.as_ref().is_some_and(|e| e.experimental))
    {
        notes.push(
            "cells with some q_v > 1 are experimental: truncation error is uncontrolled there"
                .into(),
        );
    }
    for c in report.cells.iter().filter(|c| c.error.is_some()) {
        notes.push(format!(
            "cell q={} R={} {} degree {}: {}",
            c.q,
            c.radius,
            c.bc,
            c.degree,
            c.error.as_deref().unwrap_or_default()
        ));
    }

    let mut verdicts = Vec::new();
    for e in &scenario.expect {
        verdicts.push(expectation_row(&report, scenario, e));
    }
    verdicts.push(sanity_row(&report));
    verdicts.push(VerdictRow::from_checks(
        "exact identities",
        report.exact_checks.iter(),
    ));
    verdicts.push(VerdictRow::from_checks(
        "alternating sum equals the weighted Euler characteristic",
        report.euler_checks.iter(),
    ));
    if !report.duality_checks.is_empty() {
        verdicts.push(VerdictRow::from_checks(
            "duality",
            report.duality_checks.iter(),
        ));
    }
    if scenario.checks.kunneth.is_some() {
        verdicts.push(VerdictRow::from_checks(
            "Künneth for the join",
            report.kunneth_checks.iter(),
        ));
    }
    if !scenario.checks.cone.is_empty() {
        verdicts.push(VerdictRow::from_checks("cone formula", cone_checks.iter()));
    }
    if scenario.checks.mayer_vietoris_steps > 0 {
        verdicts.push(VerdictRow::from_checks(
            "Mayer–Vietoris inequality",
            mv_checks.iter(),
        ));
    }
    Ok(RunReport {
        scenario: scenario.clone(),
        sweep: report,
        cone_checks,
        mayer_vietoris_checks: mv_checks,
        verdicts,
        notes,
    })
}

fn mayer_vietoris_steps(
    name: &str,
    t: &Truncation,
    l: &Complex,
    w: &WeightAssignment,
    scenario: &Scenario,
    bc: BoundaryCondition,
    top: usize,
) -> Result<Vec<IdentityCheck>> {
    let chain = odd_removal_chain(l, Tiebreak::Lexicographic)?;
    let mut out = Vec::new();
    let mut a = chain.start.clone();
    for step in chain
        .steps
        .iter()
        .take(scenario.checks.mayer_vietoris_steps)
    {
        let degrees: Vec<usize> = (0..=top).collect();
        out.extend(mayer_vietoris_check(
            name,
            t,
            l,
            &a,
            &step.removed,
            w,
            &degrees,
            bc,
            &scenario.options,
            BASE_TOLERANCE,
        )?);
        a = step.complex.clone();
    }
    Ok(out)
}

fn expectation_row(report: &SweepReport, scenario: &Scenario, e: &Expectation) -> VerdictRow {
    let radius = e.radius.unwrap_or_else(|| scenario.top_radius());
    let id = format!("cell q={} R={radius} {} degree {}", e.q, e.bc, e.degree);
    // weight specs are stored in their canonical form
    let cell = report.cells.iter().find(|c| {
        c.radius == radius
            && c.bc == e.bc
            && c.degree == e.degree
            && (c.q == e.q
                || parse_q(&c.q)
                    .ok()
                    .zip(parse_q(&e.q).ok())
                    .is_some_and(|(a, b)| a == b))
    });
    let target = parse_q(&e.target).map(|t| to_f64(&t)).unwrap_or(f64::NAN);
    let Some(cell) = cell else {
        return VerdictRow::new(
            &e.statement,
            Verdict::Inconclusive,
            format!("{id} not in the grid"),
            vec![id],
        );
    };
    let Some(value) = cell.value() else {
        let err = cell.error.clone().unwrap_or_default();
        return VerdictRow::new(
            &e.statement,
            Verdict::Inconclusive,
            format!("{id} failed: {err}"),
            vec![id],
        );
    };
    let ok = if e.at_most {
        value <= target + e.tolerance
    } else {
        (value - target).abs() <= e.tolerance
    };
    let mut detail = if e.at_most {
        format!("b̂ = {value:.6} ≤ {} + {}", e.target, e.tolerance)
    } else {
        format!("b̂ = {value:.6} ≈ {} ± {}", e.target, e.tolerance)
    };
    if let Some(d) = cell.disagreement {
        detail.push_str(&format!("; neumann/dirichlet disagreement {d:.4}"));
    }
    VerdictRow::new(
        &e.statement,
        if ok { Verdict::Pass } else { Verdict::Fail },
        detail,
        vec![id],
    )
}

fn sanity_row(report: &SweepReport) -> VerdictRow {
    let bad: Vec<String> = report
        .cells
        .iter()
        .filter(|c| c.estimate.is_some() && !(c.sane && c.trace_identity))
        .map(|c| format!("cell q={} R={} {} degree {}", c.q, c.radius, c.bc, c.degree))
        .collect();
    let ran = report.cells.iter().filter(|c| c.estimate.is_some()).count();
    let verdict = match (ran, bad.is_empty()) {
        (0, _) => Verdict::Inconclusive,
        (_, true) => Verdict::Pass,
        _ => Verdict::Fail,
    };
    let detail = format!(
        "{} of {ran} estimates monotone, bounded and trace-exact",
        ran - bad.len()
    );
    VerdictRow::new("estimator sanity", verdict, detail, bad)
}

impl VerdictRow {
    pub fn from_checks<'a>(
        statement: &str,
        checks: impl Iterator<Item = &'a IdentityCheck>,
    ) -> VerdictRow {
        let checks: Vec<&IdentityCheck> = checks.collect();
        let failed: Vec<&&IdentityCheck> = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect();
        let verdict = if checks.is_empty() {
            Verdict::Inconclusive
        } else if failed.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let exact = checks
            .iter()
            .filter(|c| c.status == CheckStatus::ExactPass)
            .count();
        let detail = format!(
            "{} checks: {exact} exact-pass, {} numeric-pass, {} fail",
            checks.len(),
            checks.len() - exact - failed.len(),
            failed.len()
        );
        let support = checks.iter().map(|c| check_id(c)).collect();
        VerdictRow::new(statement, verdict, detail, support)
    }
}

/// Short identifier of a check for verdict rows.
pub fn check_id(c: &IdentityCheck) -> String {
    let mut s = format!("{} q={}", c.name, c.context.q);
    if let Some(r) = c.context.radius {
        s.push_str(&format!(" R={r}"));
    }
    if let Some(bc) = c.context.bc {
        s.push_str(&format!(" {bc}"));
    }
    if let Some(d) = c.context.degree {
        s.push_str(&format!(" degree {d}"));
    }
    if let Some(a) = &c.context.subcomplex {
        s.push_str(&format!(" [{a}]"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const POINT: &str = r#"{
        "name": "point",
        "complex": "point",
        "q": ["1/3", "1", "3"],
        "radii": [3],
        "expect": [{"statement": "b0 = 3/4", "q": "1/3", "degree": 0, "target": "3/4", "tolerance": 1e-9}]
    }"#;

    #[test]
    fn point_scenario_passes() {
        let s = Scenario::from_json(POINT).unwrap();
        let r = run(&s, Path::new(".")).unwrap();
        assert!(r.passed(), "{:#?}", r.verdicts);
        assert_eq!(r.verdicts[0].verdict, Verdict::Pass);
        assert!(r.notes.iter().any(|n| n.contains("experimental")));
    }

    #[test]
    fn malformed_configs_are_config_errors() {
        for bad in [
            "{",
            r#"{"name": "x", "complex": "cube(2)", "radii": [1]}"#,
            r#"{"name": "x", "complex": "point", "radii": []}"#,
            r#"{"name": "x", "complex": "point", "radii": [1], "colour": 1}"#,
            r#"{"name": "x", "complex": "point", "radii": [100]}"#,
        ] {
            assert!(
                matches!(Scenario::from_json(bad), Err(Error::Config(_))),
                "{bad}"
            );
        }
        let s =
            Scenario::from_json(r#"{"name": "x", "complex": "point", "radii": [1], "q": ["-1"]}"#)
                .unwrap();
        assert!(matches!(run(&s, Path::new(".")), Err(Error::Config(_))));
    }
}
