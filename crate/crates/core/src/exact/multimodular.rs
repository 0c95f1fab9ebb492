//! Rank selection between exact elimination and reduction modulo a batch of
//! random large primes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::echelon::rank_of_vectors;
use super::field::{next_prime, PrimeField};
use super::sparse::{rank_exact, SparseExactMatrix};
use crate::error::Error;

/// Default matrix size (rows times columns) above which ranks are
/// computed modulo primes.
pub const DEFAULT_EXACT_THRESHOLD: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankStrategy {
    /// Matrices with at most this many entries (rows times columns) are
    /// ranked exactly.
    pub exact_threshold: usize,
    /// Number of primes in a modular batch.
    pub primes: usize,
    pub seed: u64,
}

impl Default for RankStrategy {
    fn default() -> Self {
        Self {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            primes: 2,
            seed: 0x5eed,
        }
    }
}

impl RankStrategy {
    pub fn exact_only() -> Self {
        Self {
            exact_threshold: usize::MAX,
            ..Self::default()
        }
    }

    pub fn use_exact(&self, nrows: usize, ncols: usize) -> bool {
        nrows.saturating_mul(ncols) <= self.exact_threshold
    }

    /// The prime batch for this strategy.
    pub fn prime_batch(&self) -> Vec<u64> {
        random_primes(self.seed, self.primes.max(1))
    }

    pub fn rank(&self, m: &SparseExactMatrix) -> usize {
        if self.use_exact(m.nrows(), m.ncols()) {
            rank_exact(m)
        } else {
            rank_multimodular(m, &self.prime_batch())
        }
    }
}

/// `count` distinct primes drawn uniformly from `[2^61, 2^62)` by a seeded
/// generator.
pub fn random_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let p = next_prime(rng.gen_range(1u64 << 61..1u64 << 62));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Maximum of the ranks modulo each prime in `primes`. Primes dividing a
/// denominator are skipped; if every prime is bad the exact rank is used.
pub fn rank_multimodular(m: &SparseExactMatrix, primes: &[u64]) -> usize {
    let mut best: Option<usize> = None;
    for &p in primes {
        let field = match PrimeField::new(p) {
            Ok(f) => f,
            Err(_) => continue,
        };
        match m.reduce_mod(&field) {
            Ok(cols) => {
                let r = rank_of_vectors(&field, m.nrows(), &cols);
                best = Some(best.map_or(r, |b| b.max(r)));
                if r == m.nrows().min(m.ncols()) {
                    break;
                }
            }
            Err(Error::BadPrime(_)) => continue,
            Err(e) => panic!("unexpected reduction error: {e}"),
        }
    }
    best.unwrap_or_else(|| rank_exact(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_large_distinct_and_reproducible() {
        let a = random_primes(7, 20);
        assert_eq!(a, random_primes(7, 20));
        assert_ne!(a, random_primes(8, 20));
        assert!(a.iter().all(|&p| p >= 1 << 50 && super::super::field::is_prime_u64(p)));
        let mut s = a.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 20);
    }
}
