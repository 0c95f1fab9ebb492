//! Blowing a ribbon up at the ratios of its geometric progressions lowers
//! the Clifford index by one each time until the ribbon splits.
//!
//! ```text
//! cargo run --example blow_up_sequence
//! ```

use ribbons::ribbon::{construct_geometric, min_blowups_to_hyperelliptic, Mobius};
use ribbons::{PointOnLine, Rational};

fn main() -> ribbons::Result<()> {
    let built = construct_geometric(9, 4, 11)?;
    let mut r = built.ribbon.clone();
    println!("start: {r}, Clifford index {}", r.clifford_index());
    for x in built.points() {
        r = r.blow_up(&x)?;
        println!("blow up at t = {x}: genus {}, Clifford index {}", r.genus(), r.clifford_index());
    }
    assert!(r.is_hyperelliptic());

    let steps = min_blowups_to_hyperelliptic(&built.ribbon, &built.points());
    println!("shortest sequence through the ratios: {steps:?}");

    // a generic point keeps the index or lowers it by at most one
    let generic = PointOnLine::Affine(Rational::new(17.into(), 5.into()));
    let b = built.ribbon.blow_up(&generic)?;
    println!("blow up at {generic}: Clifford index {}", b.clifford_index());

    // the point at infinity is t = 0 in the coordinate 1/t
    let at_inf = built.ribbon.blow_up(&PointOnLine::Infinity)?;
    let swapped = built.ribbon.mobius_transport(&Mobius::swap())?;
    let via_zero = swapped
        .blow_up(&PointOnLine::Affine(Rational::from_integer(0.into())))?
        .mobius_transport(&Mobius::swap())?;
    println!(
        "blow-up at infinity agrees with the transported one at 0: {}",
        at_inf.isomorphic_over_identity(&via_zero)
    );
    Ok(())
}
