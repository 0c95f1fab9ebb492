use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::echelon::{rank_of_vectors, SparseVec};
use super::field::{Field, PrimeField, RationalField};
use super::Rational;
use crate::error::Result;

/// Sparse matrix over `Q` with a fixed shape and no stored zeros.
///
/// Entries are kept column by column, sorted by row index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseExactMatrix {
    nrows: usize,
    ncols: usize,
    columns: Vec<SparseVec<Rational>>,
}

impl SparseExactMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            columns: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Rational::one())))
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions
    /// are summed and zeros are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut cols: Vec<std::collections::BTreeMap<u32, Rational>> =
            vec![Default::default(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) out of bounds");
            *cols[c].entry(r as u32).or_insert_with(Rational::zero) += v;
        }
        let columns = cols
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self {
            nrows,
            ncols,
            columns,
        }
    }

    /// Builds a matrix from sparse columns. Each column must be sorted by row
    /// index without repeats; zeros are dropped.
    pub fn from_columns(nrows: usize, columns: Vec<SparseVec<Rational>>) -> Self {
        let columns: Vec<SparseVec<Rational>> = columns
            .into_iter()
            .map(|c| {
                debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
                debug_assert!(c.iter().all(|(r, _)| (*r as usize) < nrows));
                c.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Self {
            nrows,
            ncols: columns.len(),
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &[(u32, Rational)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<Rational>] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.columns[j].binary_search_by_key(&(i as u32), |(r, _)| *r) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// `(row, col, value)` for every stored entry, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i as usize, j, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.entries().map(|(i, j, v)| (j, i, v.clone())),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![Rational::zero(); self.nrows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, x) in col {
                out[*i as usize] += x * &v[j];
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &SparseExactMatrix) -> SparseExactMatrix {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let columns = rhs
            .columns
            .par_iter()
            .map(|rc| {
                let mut acc: std::collections::BTreeMap<u32, Rational> = Default::default();
                for (k, y) in rc {
                    for (i, x) in &self.columns[*k as usize] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += x * y;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseExactMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            columns,
        }
    }

    /// Columns reduced modulo `p` into Montgomery form of `field`.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<Vec<SparseVec<u64>>> {
        self.columns
            .iter()
            .map(|c| {
                let mut out = Vec::with_capacity(c.len());
                for (i, v) in c {
                    let x = field.from_rational(v)?;
                    if x != 0 {
                        out.push((*i, x));
                    }
                }
                Ok(out)
            })
            .collect()
    }
}

impl fmt::Display for SparseExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Rank over `Q` by exact sparse elimination.
pub fn rank_exact(m: &SparseExactMatrix) -> usize {
    rank_of_vectors(&RationalField, m.nrows, &m.columns)
}

/// Rank of the reduction of `m` modulo the prime `p`.
pub fn rank_modular(m: &SparseExactMatrix, p: u64) -> Result<usize> {
    let field = PrimeField::new(p)?;
    let cols = m.reduce_mod(&field)?;
    Ok(rank_of_vectors(&field, m.nrows, &cols))
}

/// Reduced row echelon form in place over `Q`; zero rows are removed and the
/// pivot columns are returned in increasing order.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let field = RationalField;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Exact basis of the right null space of `m`, one vector per free column
/// of the reduced row echelon form.
pub fn kernel_basis(m: &SparseExactMatrix) -> Vec<Vec<Rational>> {
    let n = m.ncols;
    let mut rows = m.to_dense();
    let pivots = rref(&mut rows);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::exact::int;

    fn dense(rows: &[&[i64]]) -> SparseExactMatrix {
        SparseExactMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_and_zero() {
        for n in 0..6 {
            assert_eq!(rank_exact(&SparseExactMatrix::identity(n)), n);
            assert_eq!(rank_exact(&SparseExactMatrix::zeros(n, n)), 0);
            assert!(kernel_basis(&SparseExactMatrix::identity(n)).is_empty());
            assert_eq!(kernel_basis(&SparseExactMatrix::zeros(n, n)).len(), n);
        }
        assert_eq!(rank_modular(&SparseExactMatrix::identity(7), 1_000_003).unwrap(), 7);
    }

    #[test]
    fn entry_equal_to_prime_vanishes_mod_p() {
        let p = 1_000_003;
        let m = dense(&[&[p as i64]]);
        assert_eq!(rank_modular(&m, p).unwrap(), 0);
        assert_eq!(rank_exact(&m), 1);
    }

    #[test]
    fn bad_prime_detected() {
        let m = SparseExactMatrix::from_triplets(1, 1, [(0, 0, crate::exact::ratio(1, 7))]);
        assert_eq!(rank_modular(&m, 7), Err(Error::BadPrime(7)));
        assert_eq!(rank_modular(&m, 8), Err(Error::InvalidModulus(8)));
    }

    #[test]
    fn hankel_kernel() {
        let m = dense(&[&[1, 1], &[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // spanned by (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], int(0));
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseExactMatrix::from_triplets(2, 2, [(0, 0, int(1)), (0, 0, int(-1)), (1, 0, int(2))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), int(2));
        assert_eq!(m.get(0, 0), int(0));
    }
}
