//! Seeded random instances for the self-test and acceptance suites.

use flowcont::MultiDigraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph on `1..=max_vertices` vertices with `min_edges..=max_edges`
/// uniformly random edges, loops and parallels allowed.
pub fn graph(rng: &mut impl Rng, max_vertices: usize, min_edges: usize, max_edges: usize) -> MultiDigraph {
    let v = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(min_edges..=max_edges);
    let pairs: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect();
    MultiDigraph::from_pairs(v, &pairs).expect("endpoints are in range")
}

/// `(G, H, f)` with `|E(G)| <= g_edges` and `1 <= |E(H)| <= h_edges`.
pub fn triple(rng: &mut impl Rng, g_edges: usize, h_edges: usize) -> (MultiDigraph, MultiDigraph, Vec<usize>) {
    let g = graph(rng, 4, 0, g_edges);
    let h = graph(rng, 3, 1, h_edges);
    let f = (0..g.edge_count()).map(|_| rng.gen_range(0..h.edge_count())).collect();
    (g, h, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_instances_repeat() {
        let a: Vec<_> = (0..5).scan(rng(7), |r, _| Some(triple(r, 6, 4))).collect();
        let b: Vec<_> = (0..5).scan(rng(7), |r, _| Some(triple(r, 6, 4))).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|(g, h, f)| f.len() == g.edge_count() && h.edge_count() >= 1));
    }
}
