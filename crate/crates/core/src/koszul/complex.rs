use std::collections::HashMap;

use num_traits::One;

use crate::exact::echelon::{rank_of_vectors, SparseVec};
use crate::exact::field::{Field, PrimeField, RationalField};
use crate::exact::{Rational, RankStrategy, SparseExactMatrix};
use crate::sections::{MultiplicationTable, SectionRing};

type ModularProducts = Vec<Vec<Vec<SparseVec<u64>>>>;

/// The `k`-element subsets of `{0, ..., n-1}` as bit masks, in
/// lexicographic order of their sorted index tuples.
#[derive(Clone, Debug)]
pub struct Subsets {
    masks: Vec<u32>,
    index: HashMap<u32, u32>,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 31, "at most 31 generators");
        let mut masks = Vec::new();
        if k <= n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                masks.push(idx.iter().fold(0u32, |m, &i| m | (1 << i)));
                // advance to the next tuple in lexicographic order
                let mut pos = k;
                while pos > 0 && idx[pos - 1] == n - k + pos - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                for t in pos..k {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        Self { masks, index }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    pub fn index_of(&self, mask: u32) -> usize {
        self.index[&mask] as usize
    }
}

pub(crate) fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Koszul complexes `/\^(p+1) V (x) R_(q-1) -> /\^p V (x) R_q` of a graded
/// module `R` over `Sym V`, given by the dimensions of its graded pieces and
/// the action of a basis of `V = R_1`.
///
/// Basis of `/\^p V (x) R_q`: subset index (lexicographic) times
/// `dim R_q` plus the index in `R_q`. The differential is
/// `v_(i_0) ^ ... ^ v_(i_p) (x) r -> sum_j (-1)^j v_(..^i_j..) (x) v_(i_j) r`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    nv: usize,
    dims: Vec<usize>,
    table: MultiplicationTable,
    subsets: Vec<Subsets>,
}

impl KoszulComplex {
    /// `dims[q] = dim R_q`; `table.products[q][i][j] = v_i * r_j` in `R_(q+1)`.
    pub fn new(nv: usize, dims: Vec<usize>, table: MultiplicationTable) -> Self {
        assert_eq!(table.products.len() + 1, dims.len(), "one product block per degree");
        let subsets = (0..=nv).map(|k| Subsets::new(nv, k)).collect();
        Self {
            nv,
            dims,
            table,
            subsets,
        }
    }

    pub fn from_ring(ring: &SectionRing) -> Self {
        let dims = (0..=ring.max_power()).map(|q| ring.dimension(q)).collect();
        Self::new(ring.dimension(1), dims, ring.table().clone())
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    fn dim_r(&self, q: i64) -> usize {
        if q < 0 {
            0
        } else {
            self.dims.get(q as usize).copied().unwrap_or(0)
        }
    }

    fn wedge_count(&self, p: i64) -> usize {
        if p < 0 || p as usize > self.nv {
            0
        } else {
            self.subsets[p as usize].len()
        }
    }

    /// `dim /\^p V (x) R_q`
    pub fn term_dim(&self, p: i64, q: i64) -> usize {
        self.wedge_count(p) * self.dim_r(q)
    }

    /// Stored entries of the differential into cell `(p, q)`.
    pub fn differential_nnz(&self, p: i64, q: i64) -> usize {
        if self.term_dim(p + 1, q - 1) == 0 || self.term_dim(p, q) == 0 {
            return 0;
        }
        let block = &self.table.products[(q - 1) as usize];
        let per_generator: Vec<usize> = block
            .iter()
            .map(|row| row.iter().map(Vec::len).sum())
            .collect();
        let subsets = &self.subsets[(p + 1) as usize];
        (0..subsets.len())
            .map(|s| members(subsets.mask(s)).map(|i| per_generator[i]).sum::<usize>())
            .sum()
    }

    /// Columns of the differential into cell `(p, q)` over any field, given
    /// the product table already mapped into that field.
    fn assemble<F: Field>(
        &self,
        field: &F,
        products: &[Vec<Vec<SparseVec<F::Elem>>>],
        p: i64,
        q: i64,
    ) -> (usize, Vec<SparseVec<F::Elem>>) {
        let nrows = self.term_dim(p, q);
        let ncols = self.term_dim(p + 1, q - 1);
        if ncols == 0 || nrows == 0 {
            return (nrows, vec![Vec::new(); ncols]);
        }
        let src_dim = self.dim_r(q - 1);
        let dst_dim = self.dim_r(q);
        let block = &products[(q - 1) as usize];
        let src_sets = &self.subsets[(p + 1) as usize];
        let dst_sets = &self.subsets[p as usize];
        let mut columns = Vec::with_capacity(ncols);
        for s in 0..src_sets.len() {
            let mask = src_sets.mask(s);
            for j in 0..src_dim {
                let mut col: SparseVec<F::Elem> = Vec::new();
                for (pos, i) in members(mask).enumerate() {
                    let t = dst_sets.index_of(mask & !(1 << i));
                    let offset = (t * dst_dim) as u32;
                    let negate = pos % 2 == 1;
                    for (c, x) in &block[i][j] {
                        let x = if negate { field.neg(x) } else { x.clone() };
                        col.push((offset + c, x));
                    }
                }
                col.sort_unstable_by_key(|(r, _)| *r);
                columns.push(col);
            }
        }
        (nrows, columns)
    }

    /// Matrix of `/\^(p+1) V (x) R_(q-1) -> /\^p V (x) R_q`.
    pub fn differential(&self, p: i64, q: i64) -> SparseExactMatrix {
        let (nrows, cols) = self.assemble(&RationalField, &self.table.products, p, q);
        SparseExactMatrix::from_columns(nrows, cols)
    }

    /// Whether the composite `/\^(p+2) V (x) R_(q-2) -> /\^p V (x) R_q`
    /// through cell `(p+1, q-1)` vanishes.
    pub fn composition_vanishes(&self, p: i64, q: i64) -> bool {
        if self.term_dim(p + 2, q - 2) == 0 || self.term_dim(p, q) == 0 {
            return true;
        }
        self.differential(p, q).matmul(&self.differential(p + 1, q - 1)).is_zero()
    }

    /// Product table reduced modulo a prime, or `None` if the prime divides
    /// a denominator.
    pub fn table_mod(&self, field: &PrimeField) -> Option<ModularProducts> {
        let mut out = Vec::with_capacity(self.table.products.len());
        for block in &self.table.products {
            let mut b = Vec::with_capacity(block.len());
            for row in block {
                let mut r = Vec::with_capacity(row.len());
                for v in row {
                    let mut w = Vec::with_capacity(v.len());
                    for (c, x) in v {
                        let y = field.from_rational(x).ok()?;
                        if y != 0 {
                            w.push((*c, y));
                        }
                    }
                    r.push(w);
                }
                b.push(r);
            }
            out.push(b);
        }
        Some(out)
    }

    pub fn rank_exact(&self, p: i64, q: i64) -> usize {
        let (nrows, cols) = self.assemble(&RationalField, &self.table.products, p, q);
        rank_of_vectors(&RationalField, nrows, &cols)
    }

    /// Rank modulo one prime with a pre-reduced table.
    pub fn rank_mod(&self, field: &PrimeField, table: &[Vec<Vec<SparseVec<u64>>>], p: i64, q: i64) -> usize {
        let (nrows, cols) = self.assemble(field, table, p, q);
        rank_of_vectors(field, nrows, &cols)
    }

    /// Rank following `strategy`: exact below its threshold, otherwise the
    /// maximum over its prime batch.
    pub fn rank(&self, p: i64, q: i64, strategy: &RankStrategy, tables: &ModularTables) -> usize {
        if self.term_dim(p + 1, q - 1) == 0 || self.term_dim(p, q) == 0 {
            return 0;
        }
        if strategy.use_exact(self.term_dim(p, q), self.term_dim(p + 1, q - 1)) || tables.is_empty() {
            return self.rank_exact(p, q);
        }
        self.rank_multimodular(p, q, tables)
    }

    pub fn rank_multimodular(&self, p: i64, q: i64, tables: &ModularTables) -> usize {
        let full = self.term_dim(p + 1, q - 1).min(self.term_dim(p, q));
        let mut best = 0;
        for (field, table) in &tables.0 {
            best = best.max(self.rank_mod(field, table, p, q));
            if best == full {
                break;
            }
        }
        best
    }

    pub fn modular_tables(&self, primes: &[u64]) -> ModularTables {
        ModularTables(
            primes
                .iter()
                .filter_map(|&p| {
                    let field = PrimeField::new(p).ok()?;
                    let t = self.table_mod(&field)?;
                    Some((field, t))
                })
                .collect(),
        )
    }
}

/// Product tables reduced modulo each prime of a batch.
pub struct ModularTables(Vec<(PrimeField, ModularProducts)>);

impl ModularTables {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.0.iter().map(|(f, _)| f.modulus()).collect()
    }
}

/// `/\^(p+1) U -> /\^p U (x) U` for the `n`-dimensional space `U`.
pub fn exterior_delta(p: usize, n: usize) -> SparseExactMatrix {
    let src = Subsets::new(n, p + 1);
    let dst = Subsets::new(n, p);
    let mut triplets = Vec::new();
    for s in 0..src.len() {
        let mask = src.mask(s);
        for (pos, i) in members(mask).enumerate() {
            let t = dst.index_of(mask & !(1 << i));
            let sign = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
            triplets.push((t * n + i, s, sign));
        }
    }
    SparseExactMatrix::from_triplets(dst.len() * n, src.len(), triplets)
}

/// `/\^p U (x) U -> /\^(p+1) U`, `w (x) v -> v ^ w`.
pub fn exterior_wedge(p: usize, n: usize) -> SparseExactMatrix {
    let src = Subsets::new(n, p);
    let dst = Subsets::new(n, p + 1);
    let mut triplets = Vec::new();
    for t in 0..src.len() {
        let mask = src.mask(t);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                continue;
            }
            // moving v_i past the members of w that precede it
            let before = (mask & ((1u32 << i) - 1)).count_ones();
            let sign = if before % 2 == 0 { Rational::one() } else { -Rational::one() };
            triplets.push((dst.index_of(mask | (1 << i)), t * n + i, sign));
        }
    }
    SparseExactMatrix::from_triplets(dst.len(), src.len() * n, triplets)
}

/// Checks `wedge . delta = (p+1) id` on `/\^(p+1) U`, `dim U = n`.
pub fn wedge_retract_check(p: usize, n: usize) -> bool {
    assert!(n > p, "need n > p");
    let composite = exterior_wedge(p, n).matmul(&exterior_delta(p, n));
    let size = composite.nrows();
    let factor = Rational::from_integer((p as i64 + 1).into());
    let expect = SparseExactMatrix::from_triplets(size, size, (0..size).map(|i| (i, i, factor.clone())));
    composite == expect
}
