mod common;

use horn_core::{domino_double, generate_t, generate_u, verify_domino_theorem, TripleCache, TripleTable};
use proptest::prelude::*;

use common::{brute_force_t, table_rank_raw};

#[test]
fn matches_brute_force_through_p5() {
    let mut cache = TripleCache::new();
    for p in 1..=5 {
        let table = cache.table(p).clone();
        for r in 1..=p {
            assert_eq!(table_rank_raw(&table, r), brute_force_t(p, r), "T^{p}_{r}");
        }
    }
}

#[test]
fn golden_tables() {
    for (p, text) in [
        (3, include_str!("golden/triples_p3.json")),
        (4, include_str!("golden/triples_p4.json")),
    ] {
        let golden: serde_json::Value = serde_json::from_str(text).unwrap();
        let table = generate_t(p);
        assert_eq!(table.to_json(), golden, "golden T^{p}");
        assert_eq!(TripleTable::from_json(&golden).unwrap(), table);
    }
    assert_eq!(generate_t(4).counts(), vec![10, 21, 10, 1]);
}

#[test]
fn regeneration_is_stable() {
    let mut cache = TripleCache::new();
    let six = cache.table(6).clone();
    assert_eq!(six, generate_t(6));
    assert_eq!(six.counts(), vec![21, 126, 228, 126, 21, 1]);
}

#[test]
fn tables_are_subsets_of_u_and_symmetric() {
    let mut cache = TripleCache::new();
    for p in 1..=6 {
        let table = cache.table(p).clone();
        assert_eq!(table.rank(1), generate_u(p, 1).unwrap().as_slice());
        for r in 1..=p {
            let u = generate_u(p, r).unwrap();
            for t in table.rank(r) {
                assert!(t.satisfies_sum_identity());
                assert!(u.binary_search(t).is_ok());
                if p <= 4 {
                    assert!(table.contains(&t.swapped()), "{t} without its swap");
                }
            }
            assert!(table.rank(r).windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn domino_sum_identity_on_all_of_u() {
    for p in 1..=4 {
        for r in 1..=p {
            for t in generate_u(p, r).unwrap() {
                let d = domino_double(&t).unwrap();
                assert_eq!((d.p(), d.r()), (2 * p, 2 * r));
                assert!(d.satisfies_sum_identity());
            }
        }
    }
}

#[test]
fn domino_theorem_at_p4() {
    let report = verify_domino_theorem(4, &mut TripleCache::new()).unwrap();
    assert_eq!(report.checked, 41);
    assert!(report.failures.is_empty(), "{:?}", report.failures);
}

proptest! {
    #[test]
    fn u_identity_holds_for_every_generated_triple(p in 1usize..=6, r_seed in 0usize..6) {
        let r = 1 + r_seed % p;
        for t in generate_u(p, r).unwrap() {
            prop_assert!(t.satisfies_sum_identity());
            prop_assert_eq!(t.r(), r);
        }
    }
}
