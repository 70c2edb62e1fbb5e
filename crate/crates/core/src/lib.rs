//! Right-angled Coxeter groups built from flag complexes, truncated Davis
//! complexes, and spectral estimates of weighted L²-Betti numbers, together
//! with the exact combinatorial and rational checks that surround them.

pub mod complexes;
pub mod davis;
pub mod error;
pub mod harness;
pub mod invariants;
pub mod racg;
pub mod rational;
pub mod spectral;

pub use error::{Error, Result};
