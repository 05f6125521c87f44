use proptest::prelude::*;

use super::*;
use crate::exact_algebra::rat;

const BUDGET: u128 = 50_000_000;

#[test]
fn caj_examples() {
    let t = HurwitzTable::new();
    assert_eq!(t.h(2, 0, &[2]), rat(1, 2));
    assert_eq!(t.h(2, 0, &[4]), rat(1, 2));
    assert_eq!(t.h(1, 0, &[2, 1]), rat(2, 3));
    assert_eq!(t.h(1, 1, &[2]), rat(1, 12));
    assert_eq!(t.h(2, 0, &[3]), rat(0, 1));
    assert_eq!(t.h(2, 0, &[]), rat(0, 1));
}

#[test]
fn oracle_examples() {
    let o = |r, g, mu: &[u32]| hurwitz_oracle(&HurwitzKey::new(r, g, mu.to_vec()), BUDGET).unwrap();
    assert_eq!(o(2, 0, &[2]), rat(1, 2));
    assert_eq!(o(2, 0, &[1, 1]), rat(1, 1));
    assert_eq!(o(1, 0, &[1, 1]), rat(1, 2));
    assert_eq!(o(1, 1, &[2]), rat(1, 12));
    assert_eq!(o(2, 0, &[1, 1, 2]), rat(4, 1));
    assert_eq!(o(3, 0, &[1, 1, 1]), rat(3, 1));
}

#[test]
fn oracle_budget_guard() {
    let k = HurwitzKey::new(1, 2, vec![3, 3]);
    assert!(matches!(hurwitz_oracle(&k, 1000), Err(HurwitzError::BudgetExceeded { .. })));
}

#[test]
fn oracle_ignores_part_order() {
    for (r, g, mu) in [(1u32, 0u32, vec![2u32, 1]), (2, 0, vec![3, 1]), (2, 0, vec![2, 1, 1]), (3, 0, vec![2, 1]), (2, 0, vec![1, 3, 2])] {
        let sorted = hurwitz_oracle(&HurwitzKey::new(r, g, mu.clone()), BUDGET).unwrap();
        let raw = hurwitz_oracle_unsorted(r, g, &mu, BUDGET).unwrap();
        assert_eq!(sorted, raw);
    }
}

#[test]
fn oracle_matches_caj_small() {
    let t = HurwitzTable::new();
    for r in 1..=2u32 {
        for d in 1..=4u32 {
            for mu in crate::combinat::partitions(d) {
                for g in 0..=1u32 {
                    let k = HurwitzKey::new(r, g, mu.clone());
                    if k.s().map_or(true, |s| s > 3) {
                        continue;
                    }
                    assert_eq!(t.caj(&k), hurwitz_oracle(&k, BUDGET).unwrap(), "{k}");
                }
            }
        }
    }
}

#[test]
fn table_listing() {
    let t = HurwitzTable::new();
    assert_eq!(
        hurwitz_table(1, 0, 1, 3, &t),
        vec![(vec![1], rat(1, 1)), (vec![2], rat(1, 2)), (vec![3], rat(1, 2))]
    );
    assert_eq!(hurwitz_table(2, 0, 1, 3, &t), vec![(vec![1], rat(0, 1)), (vec![2], rat(1, 2)), (vec![3], rat(0, 1))]);
    assert_eq!(hurwitz_table(3, 0, 2, 3, &t), vec![(vec![1, 1], rat(0, 1)), (vec![1, 2], rat(1, 1))]);
}

#[test]
fn closed_forms_match_recursion() {
    let t = HurwitzTable::new();
    for r in 1..=4u32 {
        for d in 1..=12u32 {
            assert_eq!(t.h(r, 0, &[d]), h01_closed(r, d), "r={r} d={d}");
            for m1 in 1..d {
                let m2 = d - m1;
                assert_eq!(t.h(r, 0, &[m1, m2]), h02_closed(r, m1, m2), "r={r} mu=({m1},{m2})");
            }
        }
    }
}

#[test]
fn vanishing_and_positivity() {
    let t = HurwitzTable::new();
    for r in 1..=3u32 {
        for g in 0..=2u32 {
            for d in 1..=8u32 {
                for mu in crate::combinat::partitions(d) {
                    let v = t.h(r, g, &mu);
                    assert!(v >= rat(0, 1));
                    if d % r != 0 {
                        assert_eq!(v, rat(0, 1));
                    }
                }
            }
        }
    }
}

#[test]
fn write_once() {
    let t = HurwitzTable::new();
    let k = HurwitzKey::new(2, 0, vec![2, 2]);
    t.insert(k.clone(), rat(1, 3), Provenance::Oracle).unwrap();
    assert!(t.insert(k.clone(), rat(1, 3), Provenance::Recursion).is_ok());
    assert!(matches!(t.insert(k, rat(1, 2), Provenance::Recursion), Err(HurwitzError::Inconsistent { .. })));
}

#[test]
fn cache_round_trip() {
    let t = HurwitzTable::new();
    for d in 1..=9u32 {
        for mu in crate::combinat::partitions(d) {
            if t.len() < 100 {
                t.h(1, 0, &mu);
                t.h(1, 1, &mu);
            }
        }
    }
    let n = t.len();
    assert!(n >= 100);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.cache");
    cache_store(&t, &path).unwrap();
    let back = cache_load(&path).unwrap();
    assert_eq!(back.entries(), t.entries());
    assert_eq!(render_cache(&back), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn cache_parse_edge_cases() {
    assert!(parse_cache("").unwrap().is_empty());
    let t = parse_cache("# comment\n2;0;1,1;1/1\n").unwrap();
    assert_eq!(t.get(&HurwitzKey::new(2, 0, vec![1, 1])), Some(rat(1, 1)));
    assert!(matches!(parse_cache("2;0;1,1;1/x\n"), Err(HurwitzError::CorruptCache { line: 1, .. })));
    assert!(matches!(parse_cache("2;0;1,1;1/1\n2;0;1,1;1/2\n"), Err(HurwitzError::CorruptCache { line: 2, .. })));
    assert!(matches!(parse_cache("2;0;2,1;1/1\n"), Err(HurwitzError::CorruptCache { .. })));
}

#[test]
fn concurrent_fill_is_deterministic() {
    let t = std::sync::Arc::new(HurwitzTable::new());
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let t = t.clone();
            std::thread::spawn(move || t.h(2, 1, &[2 + 2 * (i % 2), 2]))
        })
        .collect();
    let vals: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let fresh = HurwitzTable::new();
    assert_eq!(vals[0], fresh.h(2, 1, &[2, 2]));
    assert_eq!(vals[1], fresh.h(2, 1, &[4, 2]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn symmetric_in_parts(r in 1u32..4, g in 0u32..2, mut mu in prop::collection::vec(1u32..5, 1..4)) {
        let t = HurwitzTable::new();
        let a = t.h(r, g, &mu);
        mu.reverse();
        let k = HurwitzKey::new(r, g, mu.clone());
        prop_assert_eq!(&k.mu, &{ let mut m = mu.clone(); m.sort(); m });
        prop_assert_eq!(a, t.caj(&k));
    }
}

#[test]
fn oracle_comparison_counts_keys() {
    let t = HurwitzTable::new();
    let n = compare_caj_oracle(2, 4, 3, &t, BUDGET).unwrap();
    assert!(n > 5);
}
