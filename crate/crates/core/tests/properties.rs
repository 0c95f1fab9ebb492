mod common;

use proptest::prelude::*;

use common::{dense_rank, hankel_clifford, Q};
use ribbons::exact::field::{next_prime, PrimeField};
use ribbons::exact::{kernel_basis, random_primes, rank_exact, rank_modular, ChartFunction, LaurentPoly, SparseExactMatrix};
use ribbons::ribbon::{construct_geometric, min_blowups_to_hyperelliptic, Mobius};
use ribbons::{PointOnLine, Ribbon};

fn small_rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| common::qr(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    small_rational().prop_filter("nonzero", |x| *x != common::q(0))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, small_rational()), 0..5).prop_map(LaurentPoly::from_terms)
}

fn chart() -> impl Strategy<Value = ChartFunction> {
    (laurent(), laurent()).prop_map(|(a, b)| ChartFunction::new(a, b))
}

fn unit() -> impl Strategy<Value = ChartFunction> {
    (nonzero_rational(), -4i64..=4, laurent())
        .prop_map(|(c, e, b)| ChartFunction::new(LaurentPoly::monomial(c, e), b))
}

fn dense_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![3 => Just(common::q(0)), 2 => small_rational()], c),
            r,
        )
    })
}

fn ribbon() -> impl Strategy<Value = Ribbon> {
    (3u32..=9).prop_flat_map(|g| {
        prop::collection::vec(prop_oneof![Just(common::q(0)), small_rational()], g as usize - 2)
            .prop_map(move |c| Ribbon::new(g, c).unwrap())
    })
}

fn mobius() -> impl Strategy<Value = Mobius> {
    (small_rational(), small_rational(), small_rational(), small_rational())
        .prop_map(|(a, b, c, d)| Mobius::new(a, b, c, d))
        .prop_filter("invertible", |m| m.det() != common::q(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_ring_axioms(x in chart(), y in chart(), z in chart()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &ChartFunction::one(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn units_invert(u in unit(), n in -3i64..=3) {
        let inv = u.inverse().unwrap();
        prop_assert!((&u * &inv).is_one());
        let p = u.pow(n).unwrap();
        let q = u.pow(-n).unwrap();
        prop_assert!((&p * &q).is_one());
    }

    #[test]
    fn non_units_are_rejected(a in laurent(), b in laurent()) {
        prop_assume!(a.num_terms() != 1);
        prop_assert!(ChartFunction::new(a, b).inverse().is_err());
    }

    #[test]
    fn rank_matches_dense_oracle(m in dense_matrix(9)) {
        let sparse = SparseExactMatrix::from_dense(&m);
        prop_assert_eq!(rank_exact(&sparse), dense_rank(m));
    }

    #[test]
    fn rank_invariant_under_permutation_and_scaling(
        m in dense_matrix(8),
        seed in any::<u64>(),
        scale in nonzero_rational(),
    ) {
        let r = rank_exact(&SparseExactMatrix::from_dense(&m));
        let mut rows = m.clone();
        let k = (seed as usize) % rows.len();
        rows.rotate_left(k);
        for x in rows[0].iter_mut() {
            *x *= &scale;
        }
        let ncols = rows[0].len();
        let shift = (seed >> 8) as usize % ncols;
        for row in rows.iter_mut() {
            row.rotate_left(shift);
        }
        prop_assert_eq!(rank_exact(&SparseExactMatrix::from_dense(&rows)), r);
        prop_assert_eq!(rank_exact(&SparseExactMatrix::from_dense(&m).transpose()), r);
    }

    #[test]
    fn kernel_and_rank_fill_the_columns(m in dense_matrix(9)) {
        let sparse = SparseExactMatrix::from_dense(&m);
        let kernel = kernel_basis(&sparse);
        prop_assert_eq!(rank_exact(&sparse) + kernel.len(), sparse.ncols());
        for v in &kernel {
            prop_assert!(sparse.mul_vec(v).iter().all(|x| *x == common::q(0)));
        }
        if !kernel.is_empty() {
            prop_assert_eq!(dense_rank(kernel.clone()), kernel.len());
        }
    }

    #[test]
    fn modular_rank_is_a_lower_bound(m in dense_matrix(8), seed in any::<u64>()) {
        let sparse = SparseExactMatrix::from_dense(&m);
        let exact = rank_exact(&sparse);
        let primes = random_primes(seed, 20);
        let mut hits = 0;
        for p in primes {
            let r = rank_modular(&sparse, p).unwrap();
            prop_assert!(r <= exact);
            if r == exact {
                hits += 1;
            }
        }
        prop_assert!(hits >= 1);
    }

    #[test]
    fn small_primes_can_drop_rank(k in 1i64..50) {
        let p = next_prime(1000 + k as u64) as i64;
        let m = SparseExactMatrix::from_dense(&[
            vec![common::q(1), common::q(1)],
            vec![common::q(1), common::q(1 + p)],
        ]);
        prop_assert_eq!(rank_exact(&m), 2);
        prop_assert_eq!(rank_modular(&m, p as u64).unwrap(), 1);
    }

    #[test]
    fn clifford_matches_dense_hankel(r in ribbon()) {
        prop_assert_eq!(r.clifford_index(), hankel_clifford(r.genus(), r.coeffs()));
        prop_assert!(r.clifford_index() <= r.max_clifford());
        prop_assert_eq!(r.clifford_index() == 0, r.is_hyperelliptic());
    }

    #[test]
    fn clifford_invariant_under_transport(r in ribbon(), m in mobius()) {
        let moved = r.mobius_transport(&m).unwrap();
        prop_assert_eq!(moved.clifford_index(), r.clifford_index());
    }

    #[test]
    fn transport_is_compatible_with_blow_up(r in ribbon(), m in mobius(), t in small_rational()) {
        // blowing up at u = t0 in the new coordinate is blowing up at its image
        let moved = r.mobius_transport(&m).unwrap();
        let image = {
            let den = &m.c * &t + &m.d;
            if den == common::q(0) {
                PointOnLine::Infinity
            } else {
                PointOnLine::Affine((&m.a * &t + &m.b) / den)
            }
        };
        let lhs = moved.blow_up(&PointOnLine::Affine(t)).unwrap();
        let rhs = r.blow_up(&image).unwrap().mobius_transport(&m).unwrap();
        prop_assert!(lhs.isomorphic_over_identity(&rhs));
    }

    #[test]
    fn blow_up_drops_genus_and_index_by_at_most_one(r in ribbon(), t in small_rational()) {
        let b = r.blow_up(&PointOnLine::Affine(t)).unwrap();
        prop_assert_eq!(b.genus(), r.genus() - 1);
        let (c, cb) = (r.clifford_index(), b.clifford_index());
        prop_assert!(cb <= c && c <= cb + 1);
    }

    #[test]
    fn constructions_reach_hyperelliptic_in_c_steps(g in 3u32..=9, seed in any::<u64>()) {
        let c = 1 + (seed % ribbons::ribbon::max_clifford(g) as u64) as u32;
        let built = construct_geometric(g, c, seed).unwrap();
        prop_assert_eq!(built.ribbon.clifford_index(), c);
        prop_assert_eq!(min_blowups_to_hyperelliptic(&built.ribbon, &built.points()), Some(c));
    }

    #[test]
    fn ribbon_json_round_trip(r in ribbon()) {
        prop_assert_eq!(Ribbon::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn montgomery_arithmetic(a in any::<u64>(), b in any::<u64>(), k in 0usize..4) {
        let p = [3u64, 65_537, 1_000_000_007, next_prime(1 << 61)][k];
        let f = PrimeField::new(p).unwrap();
        let (x, y) = (f.from_u64(a), f.from_u64(b));
        let want = ((a % p) as u128 * (b % p) as u128 % p as u128) as u64;
        use ribbons::exact::field::Field;
        prop_assert_eq!(f.to_u64(f.mul(&x, &y)), want);
        if a % p != 0 {
            prop_assert_eq!(f.to_u64(f.mul(&x, &f.inv(&x))), 1);
        }
    }
}
