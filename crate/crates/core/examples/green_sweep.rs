//! Green's predicate `K_(p,2) = 0 iff p < c` over a range of genera, with
//! two samples per Clifford index.
//!
//! ```text
//! cargo run --release --example green_sweep -- 7
//! ```

use ribbons::harness::{run_sweep, RunConfig};

fn main() -> ribbons::Result<()> {
    let genus_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let cfg = RunConfig {
        genus_max,
        ..RunConfig::default()
    };
    let report = run_sweep(&cfg)?;
    for pair in &report.pairs {
        let k2: Vec<usize> = (0..pair.genus as usize)
            .map(|p| pair.samples[0].table.get(p, 2))
            .collect();
        println!(
            "g = {}, c = {}: row q=2 {:?}, samples agree: {}, {}",
            pair.genus,
            pair.clifford,
            k2,
            pair.carpet_equal,
            if pair.passed { "ok" } else { "FAIL" }
        );
    }
    println!("all passed: {}", report.passed);
    Ok(())
}
