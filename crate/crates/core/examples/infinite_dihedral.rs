//! The infinite dihedral group from two non-adjacent vertices: b^0 tends to
//! (1-q)/(1+q) for q < 1 and everything vanishes at q = 1.
//!
//! cargo run --release --example infinite_dihedral [radius]

use coxl2::complexes::boundary_simplex;
use coxl2::davis::{BoundaryCondition, Restriction};
use coxl2::racg::WeightAssignment;
use coxl2::rational::{parse_q, to_f64};
use coxl2::spectral::{EstimatorOptions, Truncation};

fn main() -> coxl2::Result<()> {
    let radius = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(30);
    let l = boundary_simplex(1)?;
    let t = Truncation::new(&l, radius)?;
    println!(
        "R = {radius}, cubes per dimension {:?}",
        t.catalog.summary().cubes
    );
    for q in ["1/4", "1/2", "1"] {
        let qv = parse_q(q)?;
        let w = WeightAssignment::uniform(2, qv.clone())?;
        let exact = (1.0 - to_f64(&qv)) / (1.0 + to_f64(&qv));
        for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
            let est = t.estimate(
                &w,
                bc,
                Restriction::Full,
                &[0, 1],
                &EstimatorOptions::default(),
            )?;
            println!(
                "q = {q:<4} {bc:<9}  b0 = {:.4} (limit {exact:.4})  b1 = {:.4}",
                est[0].value(),
                est[1].value()
            );
        }
    }
    Ok(())
}
