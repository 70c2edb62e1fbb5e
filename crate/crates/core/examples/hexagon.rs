//! The hexagon, i.e. the barycentric subdivision of a triangle boundary.
//! At q = 1 only b^1 survives and equals 1/2; at q = 1/5 only b^0 = 1/6.
//!
//! cargo run --release --example hexagon [radius]

use coxl2::complexes::subdivided_boundary;
use coxl2::davis::{BoundaryCondition, Restriction};
use coxl2::invariants::weighted_euler;
use coxl2::racg::WeightAssignment;
use coxl2::rational::{parse_q, to_f64};
use coxl2::spectral::{EstimatorOptions, Truncation};

fn main() -> coxl2::Result<()> {
    let radius = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(8);
    let hex = subdivided_boundary(2)?;
    let t = Truncation::new(&hex, radius)?;
    println!(
        "R = {radius}, cubes per dimension {:?}",
        t.catalog.summary().cubes
    );
    for q in ["1/5", "1"] {
        let w = WeightAssignment::uniform(6, parse_q(q)?)?;
        let est = t.estimate(
            &w,
            BoundaryCondition::Neumann,
            Restriction::Full,
            &[0, 1, 2],
            &EstimatorOptions::default(),
        )?;
        let alt = est[0].value() - est[1].value() + est[2].value();
        println!(
            "q = {q:<3}  b = [{:.4}, {:.4}, {:.4}]  alternating sum {alt:.4}, weighted Euler characteristic {:.4}",
            est[0].value(),
            est[1].value(),
            est[2].value(),
            to_f64(&weighted_euler(&hex, &w)?)
        );
        for e in &est {
            println!(
                "    degree {}: plateau at eps {:.2e}, flatness {:.1e}, {}",
                e.degree, e.plateau.eps, e.plateau.flatness, e.method
            );
        }
    }
    Ok(())
}
