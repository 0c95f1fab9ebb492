//! The gluing class rewritten in a new coordinate on `P^1`. The Clifford
//! index does not depend on the coordinate.
//!
//! ```text
//! cargo run --example mobius_transport
//! ```

use ribbons::exact::int;
use ribbons::ribbon::{construct_with_clifford, Mobius};

fn main() -> ribbons::Result<()> {
    let r = construct_with_clifford(8, 2, 3)?;
    println!("{r}: Clifford index {}", r.clifford_index());
    println!("t = (a u + b)/(c u + d) for [[a, b], [c, d]]:");
    let maps = [
        Mobius::swap(),
        Mobius::new(int(1), int(1), int(0), int(1)),
        Mobius::new(int(2), int(-1), int(1), int(3)),
        Mobius::new(int(0), int(5), int(-2), int(7)),
    ];
    for m in &maps {
        let moved = r.mobius_transport(m)?;
        println!(
            "[[{}, {}], [{}, {}]]: {moved}, Clifford index {}",
            m.a,
            m.b,
            m.c,
            m.d,
            moved.clifford_index()
        );
    }
    let back = r
        .mobius_transport(&Mobius::swap())?
        .mobius_transport(&Mobius::swap())?;
    println!("swapping twice gives back the same ribbon: {}", back.isomorphic_over_identity(&r));
    Ok(())
}
