//! Incremental sparse row echelon form over an arbitrary [`Field`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;

pub type SparseVec<E> = Vec<(u32, E)>;

const NO_PIVOT: u32 = u32::MAX;

/// Keeps a set of reduced vectors with distinct leading coordinates.
/// Each stored vector has leading coefficient one.
pub struct Echelon<'f, F: Field> {
    field: &'f F,
    pivot_of: Vec<u32>,
    rows: Vec<SparseVec<F::Elem>>,
    acc: Vec<F::Elem>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F, dim: usize) -> Self {
        Self {
            field,
            pivot_of: vec![NO_PIVOT; dim],
            rows: Vec::new(),
            acc: vec![field.zero(); dim],
            queued: vec![false; dim],
            heap: BinaryHeap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored vectors; if a nonzero remainder is
    /// left it is stored and `true` is returned.
    pub fn insert(&mut self, v: &[(u32, F::Elem)]) -> bool {
        let f = self.field;
        for (i, x) in v {
            let i = *i as usize;
            self.acc[i] = f.add(&self.acc[i], x);
            if !self.queued[i] {
                self.queued[i] = true;
                self.heap.push(Reverse(i as u32));
            }
        }
        while let Some(Reverse(i)) = self.heap.pop() {
            let iu = i as usize;
            self.queued[iu] = false;
            if f.is_zero(&self.acc[iu]) {
                continue;
            }
            let piv = self.pivot_of[iu];
            if piv == NO_PIVOT {
                let lead_inv = f.inv(&self.acc[iu]);
                let mut row = Vec::with_capacity(self.heap.len() + 1);
                row.push((i, f.one()));
                self.acc[iu] = f.zero();
                while let Some(Reverse(j)) = self.heap.pop() {
                    let ju = j as usize;
                    self.queued[ju] = false;
                    if !f.is_zero(&self.acc[ju]) {
                        row.push((j, f.mul(&self.acc[ju], &lead_inv)));
                        self.acc[ju] = f.zero();
                    }
                }
                self.pivot_of[iu] = self.rows.len() as u32;
                self.rows.push(row);
                return true;
            }
            let c = std::mem::replace(&mut self.acc[iu], f.zero());
            let row = &self.rows[piv as usize];
            for (j, x) in &row[1..] {
                let ju = *j as usize;
                self.acc[ju] = f.sub(&self.acc[ju], &f.mul(&c, x));
                if !self.queued[ju] {
                    self.queued[ju] = true;
                    self.heap.push(Reverse(*j));
                }
            }
        }
        false
    }
}

/// Rank of the span of `vectors` inside a `dim`-dimensional space.
///
/// Coordinates are reordered by increasing occurrence count and shorter
/// vectors are inserted first, a cheap Markowitz-style ordering that keeps
/// fill-in low on Koszul differentials.
pub fn rank_of_vectors<F: Field>(field: &F, dim: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    if dim == 0 || vectors.is_empty() {
        return 0;
    }
    let mut count = vec![0u32; dim];
    for v in vectors {
        for (i, _) in v {
            count[*i as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..dim as u32).collect();
    order.sort_by_key(|&i| (count[i as usize], i));
    let mut relabel = vec![0u32; dim];
    for (new, &old) in order.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }
    let mut by_len: Vec<usize> = (0..vectors.len()).collect();
    by_len.sort_by_key(|&k| (vectors[k].len(), k));

    let bound = dim.min(vectors.len());
    let mut ech = Echelon::new(field, dim);
    let mut scratch: SparseVec<F::Elem> = Vec::new();
    for k in by_len {
        scratch.clear();
        scratch.extend(vectors[k].iter().map(|(i, x)| (relabel[*i as usize], x.clone())));
        ech.insert(&scratch);
        if ech.rank() == bound {
            break;
        }
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{PrimeField, RationalField};
    use crate::exact::int;

    #[test]
    fn dependent_vectors_are_rejected() {
        let f = RationalField;
        let mut e = Echelon::new(&f, 3);
        assert!(e.insert(&[(0, int(1)), (1, int(2))]));
        assert!(e.insert(&[(1, int(1)), (2, int(1))]));
        // (1, 3, 1) = first + second
        assert!(!e.insert(&[(0, int(1)), (1, int(3)), (2, int(1))]));
        assert!(e.insert(&[(2, int(5))]));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn modular_rank_sees_characteristic() {
        let f = PrimeField::new(5).unwrap();
        let two = f.from_u64(2);
        let three = f.from_u64(3);
        // rows (2, 3), (3, 2): det = -5 = 0 mod 5
        let vs = vec![vec![(0, two), (1, three)], vec![(0, three), (1, two)]];
        assert_eq!(rank_of_vectors(&f, 2, &vs), 1);
        let q = RationalField;
        let vq = vec![vec![(0, int(2)), (1, int(3))], vec![(0, int(3)), (1, int(2))]];
        assert_eq!(rank_of_vectors(&q, 2, &vq), 2);
    }
}
