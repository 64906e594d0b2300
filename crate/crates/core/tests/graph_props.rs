mod common;

use flowcont::flow::star_tension;
use flowcont::graph::parse_digraph;
use flowcont::MultiDigraph;
use proptest::prelude::*;

proptest! {
    #[test]
    fn text_format_round_trips(g in common::graph(6, 12)) {
        let text = g.to_string();
        prop_assert_eq!(parse_digraph(&text).unwrap(), g);
    }

    #[test]
    fn spanning_structure_is_deterministic(g in common::graph(6, 12)) {
        prop_assert_eq!(g.spanning_structure(), g.clone().spanning_structure());
    }

    #[test]
    fn circuits_are_orthogonal_to_star_tensions(g in common::graph(6, 12)) {
        let s = g.spanning_structure();
        prop_assert_eq!(s.circuit_count(), g.cyclomatic_number());
        for v in 0..g.vertex_count() {
            let star = star_tension(&g, v).unwrap();
            for c in s.circuits() {
                prop_assert_eq!(star.dot(c), 0);
            }
        }
    }

    #[test]
    fn forest_is_acyclic_and_spanning(g in common::graph(7, 10)) {
        let s = g.spanning_structure();
        let forest: Vec<(usize, usize)> = s.forest_edges().iter().map(|&i| (g.edge(i).tail, g.edge(i).head)).collect();
        let f = MultiDigraph::from_pairs(g.vertex_count(), &forest).unwrap();
        prop_assert_eq!(f.cyclomatic_number(), 0);
        prop_assert_eq!(f.components().1, g.components().1);
        // every chord appears in exactly one circuit, with coefficient +1
        for (k, &chord) in s.chords().iter().enumerate() {
            for (j, c) in s.circuits().iter().enumerate() {
                prop_assert_eq!(c[chord], if j == k { 1 } else { 0 });
            }
        }
    }
}
