//! The Koszul complex of the canonical ring and single cohomology cells.
//!
//! ```text
//! cargo run --release --example koszul_complex
//! ```

use ribbons::exact::rank_exact;
use ribbons::koszul::{wedge_retract_check, KoszulComplex};
use ribbons::ribbon::construct_with_clifford;
use ribbons::sections::SectionRing;
use ribbons::koszul_cohomology_dim;

fn main() -> ribbons::Result<()> {
    let r = construct_with_clifford(6, 2, 0)?;
    let ring = SectionRing::with_max_power(&r, 3)?;
    let k = KoszulComplex::from_ring(&ring);
    for (p, q) in [(1, 1), (2, 1), (2, 2)] {
        let d = k.differential(p, q);
        println!(
            "/\\^{} V (x) R_{} -> /\\^{p} V (x) R_{q}: {} x {}, rank {}",
            p + 1,
            q - 1,
            d.nrows(),
            d.ncols(),
            rank_exact(&d)
        );
    }
    println!("delta^2 = 0 into (1,2): {}", k.composition_vanishes(1, 2));
    println!("dim K_(2,1) = {}", koszul_cohomology_dim(&r, 2, 1)?);
    println!("dim K_(2,2) = {}", koszul_cohomology_dim(&r, 2, 2)?);
    println!("wedge retract for p = 2, n = 6: {}", wedge_retract_check(2, 6));
    Ok(())
}
