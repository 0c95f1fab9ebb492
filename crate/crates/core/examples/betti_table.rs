//! Betti tables of ribbons with prescribed Clifford index.
//!
//! ```text
//! cargo run --release --example betti_table -- 7
//! ```

use std::time::Instant;

use ribbons::koszul::{betti_table_with, TableOptions};
use ribbons::ribbon::{construct_with_clifford, max_clifford};

fn main() -> ribbons::Result<()> {
    let genus: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let opts = TableOptions::default();
    for c in 1..=max_clifford(genus) {
        let r = construct_with_clifford(genus, c, 1)?;
        let start = Instant::now();
        let run = betti_table_with(&r, &opts)?;
        println!("g = {genus}, Cliff = {c}  ({:.2?})", start.elapsed());
        print!("{}", run.table);
        if let Some(conf) = &run.confirmation {
            println!(
                "exact check at ({}, {}): modular {} exact {}",
                conf.p, conf.q, conf.modular, conf.exact
            );
        }
        println!();
    }
    Ok(())
}
