//! Finite Coxeter groups: for a point or a simplex the truncation is the
//! whole Davis complex, so the estimates are exact.
//!
//! cargo run --release --example finite_groups

use coxl2::complexes::{simplex, Complex};
use coxl2::davis::{BoundaryCondition, Restriction};
use coxl2::racg::WeightAssignment;
use coxl2::rational::q_frac;
use coxl2::spectral::{EstimatorOptions, Truncation};

fn main() -> coxl2::Result<()> {
    let point = Complex::from_named(&["a"], &[vec!["a"]], None)?;
    let opts = EstimatorOptions::default();
    for (name, l) in [("point", point), ("edge", simplex(1))] {
        let t = Truncation::new(&l, 4)?;
        let degrees: Vec<usize> = (0..=l.vertex_count()).collect();
        for q in [q_frac(1, 3), q_frac(1, 1), q_frac(3, 1)] {
            let w = WeightAssignment::uniform(l.vertex_count(), q.clone())?;
            let est = t.estimate(
                &w,
                BoundaryCondition::Neumann,
                Restriction::Full,
                &degrees,
                &opts,
            )?;
            let values: Vec<String> = est.iter().map(|e| format!("{:.6}", e.value())).collect();
            println!("{name:>5}  q = {q:<3}  b = [{}]", values.join(", "));
        }
    }
    // b^0 of a point is 1/(1+q); for the edge it is 1/(1+q)^2
    Ok(())
}
