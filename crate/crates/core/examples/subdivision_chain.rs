//! Barycentric subdivisions of simplex boundaries, their even parts, and
//! the chain of highest-odd-vertex deletions between them.
//!
//! cargo run --release --example subdivision_chain [n]

use coxl2::complexes::{
    even_subcomplex, link_split_check, odd_removal_chain, subdivided_boundary, Tiebreak,
};

fn main() -> coxl2::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let bc = subdivided_boundary(n)?;
    let even = even_subcomplex(&bc)?;
    println!("b∂Δ^{n}: f = {:?}, flag = {}", bc.f_vector(), bc.is_flag());
    println!("even part: f = {:?}, dim {}", even.f_vector(), even.dim());
    let chain = odd_removal_chain(&bc, Tiebreak::Lexicographic)?;
    let mut a = chain.start.clone();
    for step in &chain.steps {
        let split = link_split_check(&a, &step.removed)?;
        println!(
            "remove {:<12} grading {}  link = b∂Δ^{} * (f = {:?})  verified {}",
            step.removed,
            step.grading,
            2 * split.d - 1,
            split.upper.f_vector(),
            split.verified
        );
        a = step.complex.clone();
    }
    println!(
        "chain ends at the even part: {}",
        chain.end.named_facets() == even.named_facets()
    );
    Ok(())
}
