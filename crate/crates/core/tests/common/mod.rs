#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Plain dense Gaussian elimination over `Q`.
pub fn dense_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let lead = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &lead;
                for c in col..ncols {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Clifford index from the coefficients `c_1..c_(g-2)` through dense
/// Hankel matrices `(c_(i+j))`, `i = 1..g-m`, `j = 0..m-2`.
pub fn hankel_clifford(genus: u32, coeffs: &[Q]) -> u32 {
    let c = |l: usize| {
        if l >= 1 && l <= coeffs.len() {
            coeffs[l - 1].clone()
        } else {
            Q::zero()
        }
    };
    for m in 2..=genus as usize {
        let rows: Vec<Vec<Q>> = (1..=genus as usize - m)
            .map(|i| (0..m - 1).map(|j| c(i + j)).collect())
            .collect();
        if dense_rank(rows) < m - 1 {
            return m as u32 - 2;
        }
    }
    unreachable!("Hankel matrix for m = g has no rows")
}

/// Betti table of a complete intersection of the given degrees, from its
/// Koszul resolution: `beta_(i,j)` counts `i`-subsets of the degrees with
/// sum `j`, and `K_(p,q) = beta_(p,p+q)`. Rows `q = 0..3`, `g` columns.
pub fn complete_intersection_table(genus: usize, degrees: &[usize]) -> Vec<Vec<usize>> {
    let mut rows = vec![vec![0usize; genus]; 4];
    for mask in 0u32..(1 << degrees.len()) {
        let i = mask.count_ones() as usize;
        let j: usize = (0..degrees.len()).filter(|&k| mask & (1 << k) != 0).map(|k| degrees[k]).sum();
        let q = j - i;
        if q < 4 && i < genus {
            rows[q][i] += 1;
        }
    }
    rows
}

/// Random sparse matrix with small rational entries; some columns are
/// combinations of others so that kernels are nontrivial.
pub fn random_sparse<R: Rng>(rng: &mut R, nrows: usize, ncols: usize, density: f64) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); ncols]; nrows];
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            if rng.gen_bool(density) {
                *x = qr(rng.gen_range(-7..8), rng.gen_range(1..4));
            }
        }
    }
    if ncols >= 3 && rng.gen_bool(0.5) {
        let (a, b, t) = (rng.gen_range(0..ncols), rng.gen_range(0..ncols), rng.gen_range(0..ncols));
        let s = qr(rng.gen_range(-3..4), 2);
        for row in m.iter_mut() {
            row[t] = &row[a] + &s * &row[b];
        }
    }
    m
}

