mod common;

use bredon::bredon::{uct_check, CohomologyResult, Mode, Variance};
use bredon::cyclotomic::CycNumber;
use bredon::linalg::{homology_at, snf, FinAbGroup, IntMatrix};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(proptest_config())]

    #[test]
    fn snf_factors_the_matrix(a in matrix_strategy(5, 9)) {
        let d = snf(&a);
        prop_assert_eq!(&mul(&mul(&d.u, &d.s), &d.v), &a);
        prop_assert!(is_unit(&leibniz_det(&to_rows(&d.u))));
        prop_assert!(is_unit(&leibniz_det(&to_rows(&d.v))));
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    prop_assert!(d.s.get(i, j).is_zero());
                }
            }
        }
        for w in d.divisors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(d.divisors.iter().all(|x| *x > BigInt::zero()));
        prop_assert_eq!(&d.divisors, &invariant_factors(&a));
        prop_assert_eq!(d.rank(), rational_rank(&a));
    }

    #[test]
    fn homology_matches_minor_oracle(c in complex_strategy()) {
        for p in 0..=TOP {
            let (i, o) = c.chain_pair(p);
            let h = homology_at(&i, &o).unwrap();
            prop_assert_eq!(parts(&h), oracle_homology(&i, &o));
            prop_assert_eq!(parts(&h), c.expected_homology(p));
            let (i, o) = c.cochain_pair(p);
            prop_assert_eq!(parts(&homology_at(&i, &o).unwrap()), oracle_homology(&i, &o));
        }
    }

    #[test]
    fn cohomology_satisfies_universal_coefficients(c in complex_strategy()) {
        for p in 0..=TOP {
            let (i, o) = c.cochain_pair(p);
            let cohom = parts(&homology_at(&i, &o).unwrap());
            let (free, _) = oracle_homology(&c.chain_pair(p).0, &c.chain_pair(p).1);
            let ext = if p == 0 { vec![] } else { oracle_homology(&c.chain_pair(p - 1).0, &c.chain_pair(p - 1).1).1 };
            prop_assert_eq!(cohom, (free, ext));
        }
    }

    #[test]
    fn uct_report_passes_on_genuine_complexes(c in complex_strategy()) {
        let groups = |pair: &dyn Fn(usize) -> (IntMatrix, IntMatrix)| -> Vec<FinAbGroup> {
            (0..=TOP).map(|p| { let (i, o) = pair(p); homology_at(&i, &o).unwrap() }).collect()
        };
        let wrap = |variance, groups| CohomologyResult {
            variance,
            mode: Mode::Untwisted,
            fingerprint: String::new(),
            chain_ranks: c.ranks.clone(),
            groups,
            differentials: vec![],
        };
        let hom = wrap(Variance::Chain, groups(&|p| c.chain_pair(p)));
        let cohom = wrap(Variance::Cochain, groups(&|p| c.cochain_pair(p)));
        prop_assert!(uct_check(&cohom, &hom).pass);
    }

    #[test]
    fn matrix_text_round_trips(a in matrix_strategy(6, 1000)) {
        let back: IntMatrix = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn cyclotomic_ring_laws(
        n in prop_oneof![Just(1u32), Just(3), Just(4), Just(8), Just(12)],
        xs in proptest::collection::vec((0i64..24, -3i64..=3), 3),
        ys in proptest::collection::vec((0i64..24, -3i64..=3), 3),
        m in prop_oneof![Just(1u32), Just(2), Just(6)],
        zs in proptest::collection::vec((0i64..6, -3i64..=3), 2),
    ) {
        let build = |order: u32, terms: &[(i64, i64)]| {
            let t: Vec<(i64, BigRational)> = terms.iter().map(|&(k, c)| (k, BigRational::from_integer(c.into()))).collect();
            CycNumber::from_terms(order, &t).unwrap()
        };
        let (x, y, z) = (build(n, &xs), build(n, &ys), build(m, &zs));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        let (a, b) = (&x * &z).to_complex();
        let ((xa, xb), (za, zb)) = (x.to_complex(), z.to_complex());
        prop_assert!((a - (xa * za - xb * zb)).abs() < 1e-6 && (b - (xa * zb + xb * za)).abs() < 1e-6);
        let back: CycNumber = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn root_of_unity_has_the_right_order() {
    for n in [1u32, 2, 3, 4, 6, 8, 12, 24] {
        let z = CycNumber::root_of_unity(n, 1).unwrap();
        let mut acc = CycNumber::one();
        for k in 1..=n {
            acc = &acc * &z;
            assert_eq!(acc == CycNumber::one(), k == n, "zeta_{n}^{k}");
        }
    }
}
