//! Exact and modular ranks of sparse rational matrices.
//!
//! ```text
//! cargo run --example rank_engine
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ribbons::exact::{kernel_basis, random_primes, rank_exact, rank_modular, rank_multimodular, ratio, SparseExactMatrix};

fn main() -> ribbons::Result<()> {
    // last column is the sum of the first two; the 3 x 3 minor is -3p
    let p = 1_000_000_007i64;
    let m = SparseExactMatrix::from_dense(&[
        vec![ratio(1, 1), ratio(2, 1), ratio(3, 1), ratio(3, 1)],
        vec![ratio(4, 1), ratio(5, 1), ratio(6, 1), ratio(9, 1)],
        vec![ratio(7, 1), ratio(8, 1), ratio(9 + p, 1), ratio(15, 1)],
    ]);
    println!("rank over Q: {}", rank_exact(&m));
    println!("rank mod 1000000007: {}", rank_modular(&m, p as u64)?);
    for v in kernel_basis(&m) {
        let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        println!("kernel vector: ({})", v.join(", "));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let triplets: Vec<_> = (0..400)
        .map(|_| {
            let (i, j) = (rng.gen_range(0..60), rng.gen_range(0..80));
            (i, j, ratio(rng.gen_range(-9..10), rng.gen_range(1..5)))
        })
        .collect();
    let big = SparseExactMatrix::from_triplets(60, 80, triplets);
    let primes = random_primes(1, 2);
    println!(
        "60 x 80 with {} entries: exact rank {}, multimodular rank {} over {:?}",
        big.nnz(),
        rank_exact(&big),
        rank_multimodular(&big, &primes),
        primes
    );
    Ok(())
}
