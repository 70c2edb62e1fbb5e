use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::RunReport;
use crate::complexes::{to_json, Complex};
use crate::error::{Error, Result};
use crate::invariants::IdentityCheck;
use crate::spectral::SweepReport;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One line of a verdict table: a statement, its outcome, and the cells or
/// checks it rests on.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerdictRow {
    pub statement: String,
    pub verdict: Verdict,
    pub detail: String,
    pub support: Vec<String>,
}

impl VerdictRow {
    pub fn new(statement: &str, verdict: Verdict, detail: String, support: Vec<String>) -> Self {
        VerdictRow {
            statement: statement.into(),
            verdict,
            detail,
            support,
        }
    }
}

/// Plain-text verdict table.
pub fn verdict_table(rows: &[VerdictRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.statement.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let pad = width - r.statement.chars().count();
        let _ = writeln!(
            out,
            "{:<12} {}{}  {}",
            r.verdict.to_string(),
            r.statement,
            " ".repeat(pad),
            r.detail
        );
    }
    out
}

const CELL_HEADER: [&str; 21] = [
    "q",
    "radius",
    "bc",
    "degree",
    "value",
    "plateau_eps",
    "flatness",
    "dim_chamber",
    "trace_at_max",
    "cells",
    "method",
    "min_eigenvalue",
    "experimental",
    "sane",
    "trace_identity",
    "disagreement",
    "tolerance",
    "non_convergent",
    "error",
    "complex",
    "plateau_index",
];

/// One row per cell.
pub fn cells_csv(report: &SweepReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CELL_HEADER).map_err(csv_err)?;
    for c in &report.cells {
        let e = c.estimate.as_ref();
        let num = |f: &dyn Fn(&crate::spectral::BettiEstimate) -> f64| {
            e.map(|e| format!("{:e}", f(e))).unwrap_or_default()
        };
        w.write_record([
            c.q.clone(),
            c.radius.to_string(),
            c.bc.to_string(),
            c.degree.to_string(),
            num(&|e| e.value()),
            num(&|e| e.plateau.eps),
            num(&|e| e.plateau.flatness),
            num(&|e| e.dim_chamber),
            num(&|e| e.trace_at_max),
            e.map(|e| e.cells.to_string()).unwrap_or_default(),
            e.map(|e| e.method.clone()).unwrap_or_default(),
            num(&|e| e.min_eigenvalue),
            e.map(|e| e.experimental.to_string()).unwrap_or_default(),
            c.sane.to_string(),
            c.trace_identity.to_string(),
            c.disagreement.map(|d| format!("{d:e}")).unwrap_or_default(),
            format!("{:e}", c.tolerance),
            c.non_convergent.to_string(),
            c.error.clone().unwrap_or_default(),
            report.complex.clone(),
            e.map(|e| e.plateau.index.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// Long table of `b̂(ε)` for plotting: one row per cell and threshold.
pub fn thresholds_csv(report: &SweepReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "radius", "bc", "degree", "eps", "value"])
        .map_err(csv_err)?;
    for c in &report.cells {
        let Some(e) = &c.estimate else { continue };
        for (eps, v) in e.eps_grid.iter().zip(&e.values) {
            w.write_record([
                c.q.clone(),
                c.radius.to_string(),
                c.bc.to_string(),
                c.degree.to_string(),
                format!("{eps:e}"),
                format!("{v:e}"),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// One row per identity check.
pub fn checks_csv(checks: &[IdentityCheck]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "status",
        "lhs",
        "rhs",
        "tolerance",
        "complex",
        "subcomplex",
        "q",
        "radius",
        "bc",
        "degree",
    ])
    .map_err(csv_err)?;
    for c in checks {
        let side = |s: &crate::invariants::Side| match s {
            crate::invariants::Side::Exact { value } => value.clone(),
            crate::invariants::Side::Estimate { value } => format!("{value:e}"),
        };
        w.write_record([
            c.name.clone(),
            c.status.to_string(),
            side(&c.lhs),
            side(&c.rhs),
            c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
            c.context.complex.clone(),
            c.context.subcomplex.clone().unwrap_or_default(),
            c.context.q.clone(),
            c.context.radius.map(|r| r.to_string()).unwrap_or_default(),
            c.context.bc.map(|b| b.to_string()).unwrap_or_default(),
            c.context.degree.map(|d| d.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Plain-text summary of a scenario run.
pub fn summary_text(run: &RunReport) -> String {
    let mut out = String::new();
    let s = &run.scenario;
    let _ = writeln!(out, "scenario  {}", s.name);
    let _ = writeln!(
        out,
        "complex   {} ({} vertices, dim {})",
        s.complex, run.sweep.vertices, run.sweep.dim
    );
    let _ = writeln!(out, "q         {}", s.q.join(" "));
    let radii: Vec<String> = s.radii.iter().map(|r| r.to_string()).collect();
    let _ = writeln!(out, "radii     {}", radii.join(" "));
    let bcs: Vec<String> = s.bcs.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(out, "bc        {}", bcs.join(" "));
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>8} {:>4} {:>9} {:>3} {:>10} {:>9} {:>9} {:>10}",
        "q", "R", "bc", "i", "b̂", "eps*", "flat", "N-D"
    );
    for c in &run.sweep.cells {
        match &c.estimate {
            Some(e) => {
                let _ = writeln!(
                    out,
                    "{:>8} {:>4} {:>9} {:>3} {:>10.6} {:>9.2e} {:>9.2e} {:>10}{}",
                    c.q,
                    c.radius,
                    c.bc.to_string(),
                    c.degree,
                    e.value(),
                    e.plateau.eps,
                    e.plateau.flatness,
                    c.disagreement
                        .map(|d| format!("{d:.4}"))
                        .unwrap_or_else(|| "-".into()),
                    if c.non_convergent {
                        "  non-convergent"
                    } else {
                        ""
                    }
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{:>8} {:>4} {:>9} {:>3}  failed: {}",
                    c.q,
                    c.radius,
                    c.bc.to_string(),
                    c.degree,
                    c.error.as_deref().unwrap_or_default()
                );
            }
        }
    }
    let _ = writeln!(out);
    out.push_str(&verdict_table(&run.verdicts));
    if !run.notes.is_empty() {
        let _ = writeln!(out);
        for n in &run.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "overall   {}",
        if run.passed() { "pass" } else { "FAIL" }
    );
    out
}

/// Writes `complex.json`, `report.json`, `cells.csv`, `thresholds.csv`,
/// `checks.json`, `checks.csv` and `summary.txt` into `dir`.
pub fn write_report_dir(dir: &Path, run: &RunReport, complex: &Complex) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("complex.json"), to_json(complex)?)?;
    fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(run)? + "\n",
    )?;
    fs::write(dir.join("cells.csv"), cells_csv(&run.sweep)?)?;
    fs::write(dir.join("thresholds.csv"), thresholds_csv(&run.sweep)?)?;
    let checks = run.all_checks();
    fs::write(
        dir.join("checks.json"),
        serde_json::to_string_pretty(&checks)? + "\n",
    )?;
    fs::write(dir.join("checks.csv"), checks_csv(&checks)?)?;
    fs::write(dir.join("summary.txt"), summary_text(run))?;
    Ok(())
}

/// Reads back `report.json` and `complex.json` from a report directory.
pub fn read_report_dir(dir: &Path) -> Result<(RunReport, Complex)> {
    let run: RunReport = serde_json::from_str(&fs::read_to_string(dir.join("report.json"))?)?;
    let complex = crate::complexes::read_complex(&dir.join("complex.json"))?;
    Ok((run, complex))
}
