//! Clifford index of a ribbon from the ranks of its Hankel matrices.
//!
//! ```text
//! cargo run --example clifford_index
//! ```

use ribbons::exact::rank_exact;
use ribbons::ribbon::{construct_geometric, max_clifford};
use ribbons::Ribbon;

fn show(r: &Ribbon) {
    print!("{r}\n  Hankel ranks:");
    for m in 2..=r.genus() {
        let h = r.hankel(m);
        print!(" m={m}: {}/{}", rank_exact(&h), h.ncols());
    }
    println!("\n  Clifford index {}", r.clifford_index());
}

fn main() -> ribbons::Result<()> {
    show(&Ribbon::from_integers(5, &[1, 1, 1])?);
    show(&Ribbon::from_integers(5, &[1, 0, 1])?);
    show(&Ribbon::hyperelliptic(7)?);

    // sums of c geometric progressions have Clifford index c
    for c in 1..=max_clifford(9) {
        let built = construct_geometric(9, c, 7)?;
        let ratios: Vec<String> = built.ratios.iter().map(|x| x.to_string()).collect();
        println!("g = 9, ratios [{}]", ratios.join(", "));
        show(&built.ribbon);
    }
    Ok(())
}
