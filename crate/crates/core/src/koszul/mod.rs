//! Koszul cohomology of the canonical embedding: cells `K_(p,q)`, Betti
//! tables and the checks built on them.

mod complex;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use complex::{exterior_delta, exterior_wedge, wedge_retract_check, KoszulComplex, ModularTables, Subsets};

use crate::error::{Error, Result};
use crate::exact::RankStrategy;
use crate::ribbon::{PointOnLine, Ribbon};
use crate::sections::SectionRing;

/// Rows `q = 0..=3` of a canonical Betti table.
pub const TABLE_ROWS: usize = 4;

/// Default size budget (rows times columns of the larger differential) for
/// the exact recomputation of one cell.
pub const DEFAULT_EXACT_BUDGET: usize = 150_000;

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub strategy: RankStrategy,
    /// Recompute one randomly chosen cell with exact ranks.
    pub confirm_exact: bool,
    /// Cells with a differential larger than this (rows times columns) are
    /// not eligible for the exact recomputation.
    pub exact_budget: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            strategy: RankStrategy::default(),
            confirm_exact: true,
            exact_budget: DEFAULT_EXACT_BUDGET,
        }
    }
}

/// `dim K_(p,q)(C, omega_C)` for `0 <= p <= g-1`, `0 <= q <= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BettiJson", try_from = "BettiJson")]
pub struct BettiTable {
    pub genus: u32,
    pub clifford: u32,
    /// `rows[q][p]`
    pub rows: Vec<Vec<usize>>,
}

impl BettiTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.rows
            .get(q)
            .and_then(|row| row.get(p))
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero cells as `(p, q, dim)`, ordered by `q` then `p`.
    pub fn nonzero_cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (q, row) in self.rows.iter().enumerate() {
            for (p, &d) in row.iter().enumerate() {
                if d != 0 {
                    out.push((p, q, d));
                }
            }
        }
        out
    }

    /// Cells violating `K_(p,q) = K_(g-2-p, 3-q)` within the table.
    pub fn duality_violations(&self) -> Vec<(usize, usize)> {
        let g = self.genus as usize;
        let mut bad = Vec::new();
        for q in 0..TABLE_ROWS {
            for p in 0..g.saturating_sub(1) {
                if self.get(p, q) != self.get(g - 2 - p, 3 - q) {
                    bad.push((p, q));
                }
            }
        }
        bad
    }

    /// Cells that must vanish for a canonical curve but do not:
    /// `K_(p,0)` for `p >= 1` and `K_(g-1,q)`.
    pub fn row_bound_violations(&self) -> Vec<(usize, usize)> {
        let g = self.genus as usize;
        let mut bad = Vec::new();
        for p in 1..g {
            if self.get(p, 0) != 0 {
                bad.push((p, 0));
            }
        }
        for q in 0..TABLE_ROWS {
            if g >= 1 && self.get(g - 1, q) != 0 {
                bad.push((g - 1, q));
            }
        }
        bad
    }

    /// Plain-text diagram: rows `q = 0..3`, columns `p = 0..g-1`, zeros
    /// printed as `.`.
    pub fn diagram(&self) -> String {
        let g = self.genus as usize;
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1)
            .max(g.saturating_sub(1).to_string().len());
        let mut out = String::new();
        out.push_str("   ");
        for p in 0..g {
            out.push_str(&format!(" {p:>width$}"));
        }
        out.push('\n');
        for q in 0..TABLE_ROWS {
            out.push_str(&format!("{q}: "));
            for p in 0..g {
                let d = self.get(p, q);
                let cell = if d == 0 { ".".to_string() } else { d.to_string() };
                out.push_str(&format!(" {cell:>width$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// The `green` block of the JSON form of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenFlags {
    pub vanishing_ok: bool,
    pub nonvanishing_ok: bool,
}

#[derive(Serialize, Deserialize)]
struct BettiJson {
    genus: u32,
    clifford: u32,
    rows: Vec<Vec<usize>>,
    green: GreenFlags,
}

impl From<BettiTable> for BettiJson {
    fn from(t: BettiTable) -> Self {
        let green = t.green_flags();
        Self {
            genus: t.genus,
            clifford: t.clifford,
            rows: t.rows,
            green,
        }
    }
}

impl TryFrom<BettiJson> for BettiTable {
    type Error = Error;

    fn try_from(raw: BettiJson) -> Result<Self> {
        let g = raw.genus as usize;
        if raw.rows.len() != TABLE_ROWS || raw.rows.iter().any(|r| r.len() != g) {
            return Err(Error::InvalidInput(format!(
                "expected {TABLE_ROWS} rows of length {g}"
            )));
        }
        Ok(Self {
            genus: raw.genus,
            clifford: raw.clifford,
            rows: raw.rows,
        })
    }
}

impl BettiTable {
    /// The Green predicate read off the table; the nonvanishing clause is
    /// only tested for `c <= g-3`.
    pub fn green_flags(&self) -> GreenFlags {
        let c = self.clifford as usize;
        let g = self.genus as usize;
        GreenFlags {
            vanishing_ok: (0..c).all(|p| self.get(p, 2) == 0),
            nonvanishing_ok: c + 3 > g || self.get(c, 2) != 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagram())
    }
}

/// One cell recomputed with exact ranks next to its modular value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactConfirmation {
    pub p: usize,
    pub q: usize,
    pub modular: usize,
    pub exact: usize,
}

impl ExactConfirmation {
    pub fn agrees(&self) -> bool {
        self.modular == self.exact
    }
}

/// A computed table together with how it was computed.
#[derive(Clone, Debug)]
pub struct TableRun {
    pub table: BettiTable,
    pub primes: Vec<u64>,
    pub confirmation: Option<ExactConfirmation>,
    /// Cells `(p, q)` into which the composite of two differentials is
    /// nonzero.
    pub composition_failures: Vec<(usize, usize)>,
}

fn cell_value(complex: &KoszulComplex, ranks: &HashMap<(i64, i64), usize>, p: i64, q: i64) -> usize {
    let rank = |a: i64, b: i64| ranks.get(&(a, b)).copied().unwrap_or(0);
    complex.term_dim(p, q) - rank(p, q) - rank(p - 1, q + 1)
}

/// The Koszul cohomology table of `omega` for any ribbon of genus `>= 3`,
/// hyperelliptic or not.
pub fn koszul_table(r: &Ribbon, opts: &TableOptions) -> Result<TableRun> {
    if r.genus() < 3 {
        return Err(Error::GenusTooSmall(r.genus()));
    }
    let ring = SectionRing::with_max_power(r, TABLE_ROWS as u32)?;
    let complex = KoszulComplex::from_ring(&ring);
    let g = r.genus() as i64;
    let tables = complex.modular_tables(&opts.strategy.prime_batch());

    let mut needed: BTreeSet<(i64, i64)> = BTreeSet::new();
    for q in 0..TABLE_ROWS as i64 {
        for p in 0..g {
            needed.insert((p, q));
            needed.insert((p - 1, q + 1));
        }
    }
    let ranks: HashMap<(i64, i64), usize> = needed
        .into_par_iter()
        .map(|(p, q)| ((p, q), complex.rank(p, q, &opts.strategy, &tables)))
        .collect();
    let rows = (0..TABLE_ROWS as i64)
        .map(|q| (0..g).map(|p| cell_value(&complex, &ranks, p, q)).collect())
        .collect();
    let table = BettiTable {
        genus: r.genus(),
        clifford: r.clifford_index(),
        rows,
    };

    let confirmation = if opts.confirm_exact {
        confirm_one_cell(&complex, &tables, g, opts)
    } else {
        None
    };
    let composition_failures = (2..=TABLE_ROWS as i64)
        .flat_map(|q| (0..g).map(move |p| (p, q)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&(p, q)| !complex.composition_vanishes(p, q))
        .map(|(p, q)| (p as usize, q as usize))
        .collect();
    Ok(TableRun {
        table,
        primes: tables.primes(),
        confirmation,
        composition_failures,
    })
}

fn confirm_one_cell(
    complex: &KoszulComplex,
    tables: &ModularTables,
    g: i64,
    opts: &TableOptions,
) -> Option<ExactConfirmation> {
    let size = |p: i64, q: i64| complex.term_dim(p, q) * complex.term_dim(p + 1, q - 1);
    let cost = |p: i64, q: i64| size(p, q).max(size(p - 1, q + 1));
    let candidates: Vec<(i64, i64)> = (0..TABLE_ROWS as i64)
        .flat_map(|q| (0..g).map(move |p| (p, q)))
        .filter(|&(p, q)| {
            let c = cost(p, q);
            c > 0 && c <= opts.exact_budget
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.strategy.seed ^ (g as u64).rotate_left(17));
    let &(p, q) = candidates.choose(&mut rng)?;
    let rank_in = |f: &dyn Fn(i64, i64) -> usize, a: i64, b: i64| {
        if complex.term_dim(a + 1, b - 1) == 0 || complex.term_dim(a, b) == 0 {
            0
        } else {
            f(a, b)
        }
    };
    let exact_rank = |a: i64, b: i64| complex.rank_exact(a, b);
    let mod_rank = |a: i64, b: i64| complex.rank_multimodular(a, b, tables);
    let mid = complex.term_dim(p, q);
    let exact = mid - rank_in(&exact_rank, p, q) - rank_in(&exact_rank, p - 1, q + 1);
    let modular = if tables.is_empty() {
        exact
    } else {
        mid - rank_in(&mod_rank, p, q) - rank_in(&mod_rank, p - 1, q + 1)
    };
    Some(ExactConfirmation {
        p: p as usize,
        q: q as usize,
        modular,
        exact,
    })
}

/// Graded Betti table of the canonical embedding of a non-hyperelliptic
/// ribbon.
pub fn betti_table(r: &Ribbon) -> Result<BettiTable> {
    betti_table_with(r, &TableOptions::default()).map(|run| run.table)
}

pub fn betti_table_with(r: &Ribbon, opts: &TableOptions) -> Result<TableRun> {
    if r.is_hyperelliptic() {
        return Err(Error::HyperellipticInput);
    }
    koszul_table(r, opts)
}

/// `dim K_(p,q)(C, omega_C)` for a single cell.
pub fn koszul_cohomology_dim(r: &Ribbon, p: usize, q: usize) -> Result<usize> {
    koszul_cohomology_dim_with(r, p, q, &RankStrategy::default())
}

pub fn koszul_cohomology_dim_with(r: &Ribbon, p: usize, q: usize, strategy: &RankStrategy) -> Result<usize> {
    let g = r.genus() as usize;
    if p >= g || q >= TABLE_ROWS {
        return Err(Error::InvalidInput(format!(
            "cell ({p}, {q}) outside 0 <= p < {g}, 0 <= q < {TABLE_ROWS}"
        )));
    }
    let ring = SectionRing::with_max_power(r, q as u32 + 1)?;
    let complex = KoszulComplex::from_ring(&ring);
    let tables = complex.modular_tables(&strategy.prime_batch());
    let (p, q) = (p as i64, q as i64);
    let ranks: HashMap<(i64, i64), usize> = [(p, q), (p - 1, q + 1)]
        .into_iter()
        .map(|(a, b)| ((a, b), complex.rank(a, b, strategy, &tables)))
        .collect();
    Ok(cell_value(&complex, &ranks, p, q))
}

/// Outcome of checking `K_(p,2) = 0 <=> p < c` on one ribbon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenReport {
    pub clifford: u32,
    /// `K_(p,2) = 0` for all `p < c`.
    pub vanishing_ok: bool,
    /// `K_(c,2) != 0`; vacuously true when not checked.
    pub nonvanishing_ok: bool,
    /// The nonvanishing clause is only tested for `c <= g-3`: duality
    /// forces `K_(g-2,2) = K_(0,1)^* = 0`.
    pub nonvanishing_checked: bool,
    /// Row `q = 2` cells at `p >= g-2`, recorded without judgment.
    pub boundary_cells: Vec<(usize, usize)>,
    pub table: BettiTable,
}

impl GreenReport {
    pub fn passed(&self) -> bool {
        self.vanishing_ok && self.nonvanishing_ok
    }

    pub fn from_table(table: BettiTable) -> Self {
        let c = table.clifford as usize;
        let g = table.genus as usize;
        let GreenFlags {
            vanishing_ok,
            nonvanishing_ok,
        } = table.green_flags();
        let nonvanishing_checked = c + 3 <= g;
        let boundary_cells = (g.saturating_sub(2)..g).map(|p| (p, table.get(p, 2))).collect();
        Self {
            clifford: table.clifford,
            vanishing_ok,
            nonvanishing_ok,
            nonvanishing_checked,
            boundary_cells,
            table,
        }
    }
}

pub fn verify_green(r: &Ribbon) -> Result<GreenReport> {
    verify_green_with(r, &TableOptions::default())
}

pub fn verify_green_with(r: &Ribbon, opts: &TableOptions) -> Result<GreenReport> {
    let run = betti_table_with(r, opts)?;
    Ok(GreenReport::from_table(run.table))
}

/// `dim K_(k,1)` for `k = 0..g-1`.
pub fn linear_strand(r: &Ribbon, strategy: &RankStrategy) -> Result<Vec<usize>> {
    let ring = SectionRing::with_max_power(r, 2)?;
    let complex = KoszulComplex::from_ring(&ring);
    let tables = complex.modular_tables(&strategy.prime_batch());
    let g = r.genus() as i64;
    Ok((0..g)
        .into_par_iter()
        .map(|k| {
            complex.term_dim(k, 1)
                - complex.rank(k, 1, strategy, &tables)
                - complex.rank(k - 1, 2, strategy, &tables)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupLemmaReport {
    pub holds: bool,
    /// `dim K_(k,1)(C)`
    pub original: Vec<usize>,
    /// `dim K_(k,1)(C')` for the blow-up `C'`.
    pub blown_up: Vec<usize>,
}

impl BlowupLemmaReport {
    pub fn strict_drop(&self) -> bool {
        self.blown_up.iter().zip(&self.original).any(|(a, b)| a < b)
    }
}

/// Compares `dim K_(k,1)` of the blow-up of `r` at `x` with that of `r`.
/// Hyperelliptic inputs pass vacuously.
pub fn blowup_lemma_report(r: &Ribbon, x: &PointOnLine, strategy: &RankStrategy) -> Result<BlowupLemmaReport> {
    if r.genus() < 4 {
        return Err(Error::GenusTooSmall(r.genus()));
    }
    let blown = r.blow_up(x)?;
    if r.is_hyperelliptic() {
        return Ok(BlowupLemmaReport {
            holds: true,
            original: vec![],
            blown_up: vec![],
        });
    }
    let original = linear_strand(r, strategy)?;
    let blown_up = linear_strand(&blown, strategy)?;
    let holds = blown_up.iter().zip(&original).all(|(a, b)| a <= b);
    Ok(BlowupLemmaReport {
        holds,
        original,
        blown_up,
    })
}

pub fn verify_blowup_lemma(r: &Ribbon, x: &PointOnLine) -> Result<bool> {
    blowup_lemma_report(r, x, &RankStrategy::default()).map(|rep| rep.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(genus: u32, rows: [&[usize]; 4]) -> BettiTable {
        BettiTable {
            genus,
            clifford: 1,
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    #[test]
    fn duality_and_row_bounds() {
        let t = table(4, [&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert!(t.duality_violations().is_empty());
        assert!(t.row_bound_violations().is_empty());
        let bad = table(4, [&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert!(bad.duality_violations().contains(&(1, 0)));
        assert_eq!(bad.row_bound_violations(), vec![(1, 0)]);
    }

    #[test]
    fn diagram_prints_dots() {
        let t = table(3, [&[1, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        assert_eq!(t.diagram(), "    0 1 2\n0:  1 . .\n1:  . . .\n2:  . . .\n3:  . 1 .\n");
    }

    #[test]
    fn green_report_boundary() {
        // g = 3, c = 1: c > g - 3, nonvanishing not checked
        let t = table(3, [&[1, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let rep = GreenReport::from_table(t);
        assert!(rep.vanishing_ok && rep.nonvanishing_ok && !rep.nonvanishing_checked);
        assert_eq!(rep.boundary_cells, vec![(1, 0), (2, 0)]);
    }
}
