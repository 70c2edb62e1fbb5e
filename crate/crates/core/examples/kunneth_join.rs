//! The square is the join of two pairs of points, so its group is a product
//! of two infinite dihedral groups and the Betti numbers convolve.
//!
//! cargo run --release --example kunneth_join

use coxl2::complexes::{boundary_simplex, join};
use coxl2::davis::BoundaryCondition;
use coxl2::invariants::{weighted_euler, weighted_euler_uniform};
use coxl2::racg::WeightAssignment;
use coxl2::rational::q_frac;
use coxl2::spectral::{attach_kunneth, sweep, SweepGrid};

fn main() -> coxl2::Result<()> {
    let pair = boundary_simplex(1)?;
    let square = join(&pair, &pair);
    let q = q_frac(1, 5);
    let chi_pair = weighted_euler(&pair, &WeightAssignment::uniform(2, q.clone())?)?;
    let chi_square = weighted_euler(&square, &WeightAssignment::uniform(4, q)?)?;
    println!(
        "χ(pair) = {chi_pair}, χ(square) = {chi_square} = {}",
        &chi_pair * &chi_pair
    );
    let chi = weighted_euler_uniform(&square);
    println!(
        "χ(square) as a function of q: ({}) / ({})",
        chi.numerator(),
        chi.denominator()
    );

    let grid = SweepGrid {
        q: vec!["1/5".into(), "1".into()],
        radii: vec![20],
        bcs: vec![BoundaryCondition::Neumann],
        ..Default::default()
    };
    let a = sweep("pair", &pair, &grid)?;
    let mut j = sweep("square", &square, &grid)?;
    attach_kunneth(&mut j, &a, &a)?;
    for c in &j.kunneth_checks {
        println!(
            "q = {} degree {}: join {:.4}, convolution {:.4}: {}",
            c.context.q,
            c.context.degree.unwrap(),
            c.lhs.as_f64(),
            c.rhs.as_f64(),
            c.status
        );
    }
    Ok(())
}
