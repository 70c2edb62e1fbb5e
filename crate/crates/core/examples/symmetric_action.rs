//! The symmetric group on the 2k+1 vertices of a 2k-simplex acts on the
//! even part of its subdivided boundary, transitively on top simplices.
//!
//! cargo run --release --example symmetric_action

use coxl2::complexes::sym_action_check;

fn main() -> coxl2::Result<()> {
    for k in 1..=2 {
        let r = sym_action_check(k, 2)?;
        println!(
            "k = {k}: {} permutations, automorphisms {}, even part dim {}, {} top simplices in one orbit of size {}",
            r.permutations_checked, r.automorphisms, r.even_dim, r.top_simplices, r.orbit_size
        );
    }
    Ok(())
}
