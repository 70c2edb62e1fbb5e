//! Local checks on the hexagon: the star of a vertex against its link, and
//! the Mayer–Vietoris inequality along the odd-removal chain.
//!
//! cargo run --release --example cone_mayer_vietoris

use coxl2::complexes::{odd_removal_chain, subdivided_boundary, Tiebreak};
use coxl2::davis::BoundaryCondition;
use coxl2::invariants::{cone_check, mayer_vietoris_check};
use coxl2::racg::WeightAssignment;
use coxl2::rational::q_frac;
use coxl2::spectral::{EstimatorOptions, Truncation};

fn main() -> coxl2::Result<()> {
    let hex = subdivided_boundary(2)?;
    let t = Truncation::new(&hex, 6)?;
    let q = WeightAssignment::uniform(6, q_frac(1, 5))?;
    let opts = EstimatorOptions::default();
    let bc = BoundaryCondition::Neumann;
    for c in cone_check("hexagon", &t, &hex, "{0}", &q, &[0, 1, 2], bc, &opts, 0.02)? {
        println!(
            "cone degree {}: star {:.4}, link/(1+q) {:.4}: {}",
            c.context.degree.unwrap(),
            c.lhs.as_f64(),
            c.rhs.as_f64(),
            c.status
        );
    }
    let chain = odd_removal_chain(&hex, Tiebreak::Lexicographic)?;
    let mut a = chain.start.clone();
    for step in &chain.steps {
        for c in mayer_vietoris_check(
            "hexagon",
            &t,
            &hex,
            &a,
            &step.removed,
            &q,
            &[0, 1, 2],
            bc,
            &opts,
            0.02,
        )? {
            println!(
                "remove {} degree {}: {:.4} ≤ {:.4}: {}",
                step.removed,
                c.context.degree.unwrap(),
                c.lhs.as_f64(),
                c.rhs.as_f64(),
                c.status
            );
        }
        a = step.complex.clone();
    }
    Ok(())
}
