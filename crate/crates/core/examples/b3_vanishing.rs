//! b∂Δ³ at desk scale: degrees 2 and 3 should vanish for q ≤ 1. Prints
//! Neumann and Dirichlet estimates side by side with the Euler check.
//!
//! cargo run --release --example b3_vanishing [radius]

use coxl2::complexes::subdivided_boundary;
use coxl2::davis::BoundaryCondition;
use coxl2::spectral::{sweep, SweepGrid};

fn main() -> coxl2::Result<()> {
    let radius = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let l = subdivided_boundary(3)?;
    let grid = SweepGrid {
        q: vec!["1/2".into(), "1".into()],
        radii: vec![radius],
        ..Default::default()
    };
    let report = sweep("b∂Δ³", &l, &grid)?;
    for q in &grid.q {
        for i in 0..4 {
            let n = report
                .cell(q, radius, BoundaryCondition::Neumann, i)
                .and_then(|c| c.value());
            let d = report
                .cell(q, radius, BoundaryCondition::Dirichlet, i)
                .and_then(|c| c.value());
            println!("q = {q:<3} degree {i}: neumann {n:.4?}  dirichlet {d:.4?}");
        }
    }
    for c in &report.euler_checks {
        println!(
            "euler q = {} {:?}: {:.4} vs {:.4} within {}: {}",
            c.context.q,
            c.context.bc.unwrap(),
            c.lhs.as_f64(),
            c.rhs.as_f64(),
            c.tolerance.unwrap(),
            c.status
        );
    }
    Ok(())
}
