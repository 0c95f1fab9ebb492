//! Exact computations on rational ribbons: gluing classes and the Clifford
//! index, sections of powers of the dualizing sheaf, and Koszul cohomology
//! tables of the canonical embedding.

pub mod error;
pub mod exact;
pub mod harness;
pub mod koszul;
pub mod ribbon;
pub mod sections;

pub use error::{Error, Result};
pub use exact::Rational;
pub use koszul::{betti_table, koszul_cohomology_dim, verify_green, BettiTable, GreenReport};
pub use ribbon::{PointOnLine, Ribbon};
pub use sections::{section_space, SectionSpace};
