//! Growth series of a few right-angled Coxeter groups, checked against the
//! shell sizes of balls.
//!
//! cargo run --release --example growth_series

use coxl2::complexes::{boundary_simplex, cycle, subdivided_boundary};
use coxl2::racg::{growth_series, Ball, CoxeterSystem};

fn main() -> coxl2::Result<()> {
    let radius = 6;
    for (name, l) in [
        ("dihedral", boundary_simplex(1)?),
        ("pentagon", cycle(5)?),
        ("hexagon", subdivided_boundary(2)?),
        ("b∂Δ³", subdivided_boundary(3)?),
    ] {
        let sys = CoxeterSystem::from_complex(&l)?;
        let w = growth_series(&sys);
        let taylor: Vec<String> = w.taylor(radius)?.iter().map(|c| c.to_string()).collect();
        let shells = Ball::new(&sys, radius)?.shell_sizes();
        println!("{name}: W(q) = ({}) / ({})", w.numerator(), w.denominator());
        println!("    series {}", taylor.join(" "));
        println!(
            "    shells {}",
            shells
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    let sys = CoxeterSystem::from_complex(&cycle(5)?)?;
    let x = sys.parse("0 1 3 2 4 0")?;
    println!(
        "normal form of 0 1 3 2 4 0 in the pentagon group: {}",
        sys.format(&x)
    );
    Ok(())
}
