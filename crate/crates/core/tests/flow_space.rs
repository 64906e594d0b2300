mod common;

use std::collections::BTreeSet;

use flowcont::flow::{count_nowhere_zero_flows, enumerate_flows, filter_flows, is_flow, is_tension, star_tension};
use flowcont::{GroupSpec, GroupVector, Int, MultiDigraph};
use proptest::prelude::*;

fn within(group: &GroupSpec, edges: usize, budget: u128) -> bool {
    group.order().unwrap().saturating_pow(edges as u32) <= budget
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// Circuit combinations and brute-force filtering give the same flows.
    #[test]
    fn circuit_generators_span_all_flows(g in common::graph(4, 5)) {
        for m in common::small_groups() {
            if !within(&m, g.edge_count(), 4096) {
                continue;
            }
            let generated: Vec<GroupVector> = enumerate_flows(&g, &m, 4096).unwrap().collect();
            let generated_set: BTreeSet<_> = generated.iter().cloned().collect();
            prop_assert_eq!(generated.len(), generated_set.len(), "duplicates over {}", m);
            let filtered: BTreeSet<_> = filter_flows(&g, &m, 4096).unwrap().collect();
            prop_assert_eq!(generated_set, filtered, "over {}", m);
        }
    }

    /// Kirchhoff sums agree with vanishing dot products against star tensions.
    #[test]
    fn kirchhoff_matches_star_duality(
        g in common::graph(5, 7),
        n in 1u64..7,
        seed in prop::collection::vec(0i64..100, 7),
    ) {
        let m = GroupSpec::cyclic(n).unwrap();
        let values: Vec<Int> = (0..g.edge_count()).map(|e| seed[e] % n as Int).collect();
        let phi = GroupVector::cyclic(&values);
        let dual = (0..g.vertex_count()).all(|v| {
            let star = star_tension(&g, v).unwrap();
            star.as_slice().iter().zip(&values).map(|(a, b)| a * b).sum::<Int>().rem_euclid(n as Int) == 0
        });
        prop_assert_eq!(is_flow(&g, &phi, &m).unwrap(), dual);
    }

    #[test]
    fn star_tensions_are_tensions(g in common::graph(5, 8), n in 1u64..9) {
        for v in 0..g.vertex_count() {
            let star = star_tension(&g, v).unwrap();
            prop_assert!(is_tension(&g, &GroupVector::cyclic(star.as_slice()), &GroupSpec::integers()).unwrap());
            prop_assert!(is_tension(&g, &GroupVector::cyclic(star.as_slice()), &GroupSpec::cyclic(n).unwrap()).unwrap());
        }
    }

    /// Nowhere-zero counts depend only on |M|.
    #[test]
    fn nowhere_zero_counts_depend_on_order(g in common::graph(4, 6)) {
        for (a, b) in [("Z4", "Z2xZ2"), ("Z6", "Z2xZ3"), ("Z8", "Z2xZ4"), ("Z9", "Z3xZ3")] {
            let (a, b) = (common::group(a), common::group(b));
            prop_assert_eq!(
                count_nowhere_zero_flows(&g, &a, 1_000_000).unwrap(),
                count_nowhere_zero_flows(&g, &b, 1_000_000).unwrap()
            );
        }
    }
}

#[test]
fn builtin_nowhere_zero_counts() {
    let cases = [
        (MultiDigraph::k4(), 6),
        (MultiDigraph::dicycle(5), 3),
        (MultiDigraph::digon(3), 6),
        (MultiDigraph::single_loop(), 3),
    ];
    for (g, expect) in cases {
        let z4 = count_nowhere_zero_flows(&g, &common::group("Z4"), 1_000_000).unwrap();
        let z2z2 = count_nowhere_zero_flows(&g, &common::group("Z2xZ2"), 1_000_000).unwrap();
        let brute = filter_flows(&g, &common::group("Z4"), 1_000_000).unwrap().filter(GroupVector::is_nowhere_zero).count();
        assert_eq!((z4, z2z2, brute as u64), (expect, expect, expect), "{g:?}");
    }
}
