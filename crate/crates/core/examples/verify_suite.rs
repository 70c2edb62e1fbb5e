//! The verification suite: combinatorial checks, numeric sweeps and the
//! identities attached to them.
//!
//! cargo run --release --example verify_suite [smoke|default|full]

use coxl2::harness::{verify_suite, SuiteBudget};

fn main() -> coxl2::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "smoke".into());
    let report = verify_suite(&SuiteBudget::named(&name)?)?;
    print!("{}", report.summary());
    Ok(())
}
