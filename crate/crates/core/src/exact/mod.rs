//! Exact scalar, Laurent polynomial, dual-number and sparse matrix
//! arithmetic over `Q`, plus modular rank computation.

mod chart;
pub mod echelon;
pub mod field;
mod laurent;
pub mod multimodular;
mod sparse;

use num_bigint::BigInt;

pub use chart::{chart_inverse, chart_mul, ChartFunction};
pub use laurent::{pow_i64 as pow_rational, LaurentPoly};
pub use multimodular::{random_primes, rank_multimodular, RankStrategy};
pub use sparse::{kernel_basis, rank_exact, rank_modular, rref, SparseExactMatrix};

/// Exact rational scalar in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
