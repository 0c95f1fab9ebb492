mod common;

use common::complete_intersection_table;
use ribbons::exact::RankStrategy;
use ribbons::koszul::{betti_table_with, koszul_table, linear_strand, KoszulComplex, TableOptions};
use ribbons::ribbon::{construct_with_clifford, max_clifford};
use ribbons::sections::SectionRing;
use ribbons::{betti_table, koszul_cohomology_dim, verify_green, Error, Ribbon};

#[test]
fn complete_intersection_tables() {
    for (g, c, degrees) in [(3, 1, vec![4]), (4, 1, vec![2, 3]), (5, 2, vec![2, 2, 2])] {
        for seed in 0..3 {
            let r = construct_with_clifford(g, c, seed).unwrap();
            let t = betti_table(&r).unwrap();
            assert_eq!(t.rows, complete_intersection_table(g as usize, &degrees), "g={g} seed={seed}");
        }
    }
}

#[test]
fn exact_and_modular_tables_agree() {
    let exact = TableOptions {
        strategy: RankStrategy::exact_only(),
        confirm_exact: false,
        ..TableOptions::default()
    };
    let modular = TableOptions {
        strategy: RankStrategy {
            exact_threshold: 0,
            ..RankStrategy::default()
        },
        ..TableOptions::default()
    };
    for g in 3..=6 {
        for c in 1..=max_clifford(g) {
            let r = construct_with_clifford(g, c, 9).unwrap();
            let a = betti_table_with(&r, &exact).unwrap();
            let b = betti_table_with(&r, &modular).unwrap();
            assert_eq!(a.table, b.table, "g={g} c={c}");
            assert!(b.confirmation.unwrap().agrees());
            assert!(a.composition_failures.is_empty());
        }
    }
}

#[test]
fn single_cells_match_the_table() {
    let r = construct_with_clifford(7, 2, 3).unwrap();
    let t = betti_table(&r).unwrap();
    for (p, q) in [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (5, 3), (0, 0)] {
        assert_eq!(koszul_cohomology_dim(&r, p, q).unwrap(), t.get(p, q), "({p},{q})");
    }
    let strand = linear_strand(&r, &RankStrategy::default()).unwrap();
    assert_eq!(strand, t.rows[1]);
    assert!(koszul_cohomology_dim(&r, 7, 1).is_err());
}

#[test]
fn differentials_compose_to_zero() {
    for (g, c) in [(5, 1), (6, 2), (7, 3)] {
        let r = construct_with_clifford(g, c, 1).unwrap();
        let ring = SectionRing::new(&r).unwrap();
        let k = KoszulComplex::from_ring(&ring);
        for q in 2..=4 {
            for p in 0..g as i64 {
                assert!(k.composition_vanishes(p, q), "g={g} ({p},{q})");
            }
        }
    }
}

#[test]
fn green_reports() {
    for (g, c) in [(3, 1), (6, 2), (7, 3)] {
        let rep = verify_green(&construct_with_clifford(g, c, 2).unwrap()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.nonvanishing_checked, c + 3 <= g);
    }
    // for g = 3 duality kills K_(1,2), the boundary cell is recorded only
    let rep = verify_green(&construct_with_clifford(3, 1, 0).unwrap()).unwrap();
    assert_eq!(rep.boundary_cells, vec![(1, 0), (2, 0)]);
}

#[test]
fn hyperelliptic_ribbons() {
    let h = Ribbon::hyperelliptic(6).unwrap();
    assert_eq!(betti_table(&h), Err(Error::HyperellipticInput));
    // the engine still computes the Koszul table of omega
    let run = koszul_table(&h, &TableOptions::default()).unwrap();
    assert_eq!(run.table.rows[1], vec![0, 10, 20, 15, 4, 0]);
    assert!(run.table.duality_violations().is_empty());
}
