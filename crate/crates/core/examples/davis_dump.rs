//! Build a weighted truncation, write it in the binary dump format, read it
//! back and estimate from the copy.
//!
//! cargo run --release --example davis_dump

use coxl2::complexes::cycle;
use coxl2::davis::{
    read_weighted_complex, write_weighted_complex, BoundaryCondition, CubeCatalog, Restriction,
    WeightedComplex,
};
use coxl2::racg::{CoxeterSystem, WeightAssignment};
use coxl2::rational::q_frac;
use coxl2::spectral::{vn_betti_estimate, EstimatorOptions};

fn main() -> coxl2::Result<()> {
    let sys = CoxeterSystem::from_complex(&cycle(5)?)?;
    let catalog = CubeCatalog::build(&sys, 6)?;
    let q = WeightAssignment::uniform(5, q_frac(1, 2))?;
    let wc =
        WeightedComplex::assemble(&catalog, &q, BoundaryCondition::Neumann, Restriction::Full)?;
    println!(
        "cells {:?}, d∘d = 0: {}",
        wc.counts(),
        wc.coboundary_squares_to_zero()
    );

    let mut bytes = Vec::new();
    write_weighted_complex(&wc, &mut bytes)?;
    let copy = read_weighted_complex(bytes.as_slice())?;
    println!("dump is {} bytes", bytes.len());
    for i in 0..=2 {
        let a = vn_betti_estimate(&wc, i, &EstimatorOptions::default())?;
        let b = vn_betti_estimate(&copy, i, &EstimatorOptions::default())?;
        println!(
            "degree {i}: {:.6} from memory, {:.6} from the dump",
            a.value(),
            b.value()
        );
    }
    Ok(())
}
