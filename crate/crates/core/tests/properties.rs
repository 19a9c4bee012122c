mod common;

use common::{linear_scan, recurrence};
use fcgrid_core::io::{decode_cascade, encode_cascade};
use fcgrid_core::{
    build_cascade, build_cascade_with, cascade_lookup, cascade_lookup_traced, naive_lookup,
    validate_structure, BuildOptions, GridSet, TieBreak,
};
use proptest::prelude::*;

/// Grid sets on a coarse lattice so duplicates and shared values are common.
fn gridset() -> impl Strategy<Value = GridSet> {
    prop::collection::vec(prop::collection::vec(0u32..64, 1..40), 1..8).prop_map(|grids| {
        GridSet::new(
            grids
                .into_iter()
                .map(|mut g| {
                    g.sort_unstable();
                    g.into_iter().map(|v| f64::from(v) * 0.5).collect()
                })
                .collect(),
        )
        .unwrap()
    })
}

fn probe_keys(grids: &GridSet) -> Vec<f64> {
    let mut keys = vec![-1.0, 0.0, 33.0, f64::INFINITY, f64::NEG_INFINITY];
    for g in grids.grids() {
        for &v in g.iter() {
            keys.extend([v.next_down(), v, v.next_up(), v + 0.25]);
        }
    }
    keys
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cascade_matches_linear_scan(grids in gridset()) {
        let c = build_cascade(&grids);
        for key in probe_keys(&grids) {
            let want = linear_scan(&grids, key);
            prop_assert_eq!(&cascade_lookup(&c, &grids, key).unwrap().indices, &want, "key {}", key);
            prop_assert_eq!(&naive_lookup(&grids, key).unwrap().indices, &want);
        }
    }

    #[test]
    fn structure_invariants(grids in gridset()) {
        let c = build_cascade(&grids);
        prop_assert!(validate_structure(&c, &grids).is_empty());
        prop_assert_eq!(c.level_sizes(), recurrence(&grids.sizes(), false));
        prop_assert!(c.total_entries() <= 2 * grids.total_len());
    }

    #[test]
    fn traced_lookups_are_cheap(grids in gridset(), key in -2.0f64..34.0) {
        let c = build_cascade(&grids);
        let t = cascade_lookup_traced(&c, &grids, key).unwrap();
        let m1 = c.level(0).len();
        prop_assert_eq!(t.binary_searches, 1);
        prop_assert!(t.binary_search_comparisons <= m1.ilog2() as usize + 1);
        prop_assert_eq!(t.per_level_comparisons.len(), grids.k() - 1);
        prop_assert!(t.per_level_comparisons.iter().all(|&n| n <= 1));
        prop_assert_eq!(t.result, cascade_lookup(&c, &grids, key).unwrap());
    }

    #[test]
    fn tie_break_is_immaterial(grids in gridset()) {
        let a = build_cascade(&grids);
        let b = build_cascade_with(&grids, BuildOptions { tie_break: TieBreak::PromotedFirst, ..Default::default() });
        prop_assert!(validate_structure(&b, &grids).is_empty());
        for key in probe_keys(&grids) {
            prop_assert_eq!(a.lookup(key).unwrap(), b.lookup(key).unwrap());
        }
    }

    #[test]
    fn deterministic(grids in gridset(), key in -2.0f64..34.0) {
        let a = build_cascade(&grids);
        let b = build_cascade(&grids);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.lookup_traced(key).unwrap(), b.lookup_traced(key).unwrap());
    }

    #[test]
    fn snapshot_round_trip(grids in gridset()) {
        let c = build_cascade(&grids);
        let bytes = encode_cascade(&c);
        let back = decode_cascade(&bytes).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(encode_cascade(&back), bytes);
        for key in probe_keys(&grids) {
            prop_assert_eq!(back.lookup(key).unwrap(), c.lookup(key).unwrap());
        }
    }
}

#[test]
fn shared_cascade_is_usable_from_many_threads() {
    let grids = fcgrid_core::verify::fuzz_gridsets(1, 99).unwrap().remove(0);
    let c = build_cascade(&grids);
    let keys = fcgrid_core::verify::boundary_keys(&grids);
    std::thread::scope(|s| {
        for chunk in keys.chunks(keys.len() / 4 + 1) {
            let (c, grids) = (&c, &grids);
            s.spawn(move || {
                for &key in chunk {
                    assert_eq!(c.lookup(key).unwrap().indices, linear_scan(grids, key));
                }
            });
        }
    });
}
