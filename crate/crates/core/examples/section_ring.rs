//! Sections of powers of the dualizing sheaf and the multiplication maps
//! between them.
//!
//! ```text
//! cargo run --example section_ring
//! ```

use ribbons::exact::rank_exact;
use ribbons::ribbon::construct_with_clifford;
use ribbons::sections::{expected_dimension, omega_transition, SectionRing};

fn main() -> ribbons::Result<()> {
    let r = construct_with_clifford(5, 2, 0)?;
    println!("{r}");
    println!("tau_1 = u tau_2 with u = {}", omega_transition(&r).unit);

    let ring = SectionRing::with_max_power(&r, 3)?;
    for q in 0..=3 {
        let space = ring.space(q);
        println!(
            "R_{q}: dimension {} (expected {}), degree cap {}",
            space.dimension(),
            expected_dimension(r.genus(), q),
            space.degree_cap()
        );
    }
    println!("canonical sections:");
    for s in ring.space(1).basis() {
        println!("  {s}");
    }
    for q in 0..3 {
        let m = ring.mult_matrix(q);
        println!("V (x) R_{q} -> R_{}: rank {} of {}", q + 1, rank_exact(&m), m.nrows());
    }
    Ok(())
}
