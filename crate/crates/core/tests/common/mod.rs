#![allow(dead_code)]

use flowcont::{GroupSpec, MultiDigraph};
use proptest::prelude::*;

/// Graphs with `1..=max_vertices` vertices and `0..=max_edges` arbitrary edges
/// (loops and parallels included).
pub fn graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = MultiDigraph> {
    (1..=max_vertices).prop_flat_map(move |v| {
        prop::collection::vec((0..v, 0..v), 0..=max_edges)
            .prop_map(move |pairs| MultiDigraph::from_pairs(v, &pairs).unwrap())
    })
}

/// `(G, H, assignment)` with `H` carrying at least one edge.
pub fn instance(
    g_vertices: usize,
    g_edges: usize,
    h_vertices: usize,
    h_edges: usize,
) -> impl Strategy<Value = (MultiDigraph, MultiDigraph, Vec<usize>)> {
    (graph(g_vertices, g_edges), (1..=h_vertices).prop_flat_map(move |v| {
        prop::collection::vec((0..v, 0..v), 1..=h_edges)
            .prop_map(move |pairs| MultiDigraph::from_pairs(v, &pairs).unwrap())
    }))
    .prop_flat_map(|(g, h)| {
        let k = h.edge_count();
        let m = g.edge_count();
        (Just(g), Just(h), prop::collection::vec(0..k, m..=m))
    })
}

pub fn group(text: &str) -> GroupSpec {
    text.parse().unwrap()
}

/// Small finite groups, cyclic and not.
pub fn small_groups() -> Vec<GroupSpec> {
    ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z2xZ2", "Z2xZ3", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"]
        .iter()
        .map(|t| group(t))
        .collect()
}
