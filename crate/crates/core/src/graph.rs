//! Multidigraphs with loops and parallel edges, the builtin families, the
//! text format, and fundamental-circuit bases.
//!
//! Text format: a `V E` header line followed by `E` lines `tail head`,
//! 0-indexed and whitespace separated. Everything after a `#` is a comment;
//! blank lines are ignored.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Int, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Edge { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn reversed(&self) -> Self {
        Edge { tail: self.head, head: self.tail }
    }
}

/// A finite multidigraph. Edges are identified by their position.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiDigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl MultiDigraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for index in [e.tail, e.head] {
                if index >= vertex_count {
                    return Err(Error::VertexOutOfRange { index, vertex_count });
                }
            }
        }
        Ok(MultiDigraph { vertex_count, edges })
    }

    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertex_count, pairs.iter().map(|&(t, h)| Edge::new(t, h)).collect())
    }

    /// `n` isolated vertices.
    pub fn edgeless(n: usize) -> Self {
        MultiDigraph { vertex_count: n, edges: Vec::new() }
    }

    /// Two vertices joined by `k` parallel edges `0 -> 1`.
    pub fn digon(k: usize) -> Self {
        MultiDigraph { vertex_count: 2, edges: vec![Edge::new(0, 1); k] }
    }

    /// Directed cycle `0 -> 1 -> ... -> k-1 -> 0`; `k = 1` is a loop.
    pub fn dicycle(k: usize) -> Self {
        MultiDigraph { vertex_count: k, edges: (0..k).map(|i| Edge::new(i, (i + 1) % k)).collect() }
    }

    /// One vertex with one loop.
    pub fn single_loop() -> Self {
        MultiDigraph { vertex_count: 1, edges: vec![Edge::new(0, 0)] }
    }

    /// `K_4` with every edge oriented from the lower to the higher vertex,
    /// edges in order 01, 02, 03, 12, 13, 23.
    pub fn k4() -> Self {
        Self::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Petersen graph: outer cycle `i -> i+1` (edges 0..5), spokes `i -> i+5`
    /// (edges 5..10), inner pentagram `5+i -> 5+(i+2)%5` (edges 10..15).
    pub fn petersen() -> Self {
        let mut pairs = Vec::with_capacity(15);
        pairs.extend((0..5).map(|i| (i, (i + 1) % 5)));
        pairs.extend((0..5).map(|i| (i, i + 5)));
        pairs.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Self::from_pairs(10, &pairs).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.tail == v) as usize + (e.head == v) as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Copy with edge `i` turned around.
    pub fn with_reversed_edge(&self, i: usize) -> Result<Self> {
        if i >= self.edges.len() {
            return Err(Error::EdgeOutOfRange { index: i, edge_count: self.edges.len() });
        }
        let mut out = self.clone();
        out.edges[i] = out.edges[i].reversed();
        Ok(out)
    }

    /// Connected-component label per vertex (labels in order of first vertex)
    /// and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut root_label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            label[v] = root_label[r];
        }
        (label, count)
    }

    /// Edge indices grouped by connected component, each group ascending;
    /// components without edges are omitted.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        let (label, count) = self.components();
        let mut groups = vec![Vec::new(); count];
        for (i, e) in self.edges.iter().enumerate() {
            groups[label[e.tail]].push(i);
        }
        groups.retain(|g| !g.is_empty());
        groups.sort_by_key(|g| g[0]);
        groups
    }

    /// `|E| - |V| + components`, the dimension of the flow space.
    pub fn cyclomatic_number(&self) -> usize {
        let (_, c) = self.components();
        self.edges.len() + c - self.vertex_count
    }

    /// Deterministic spanning forest and its fundamental circuits.
    ///
    /// Edges are scanned in index order and kept whenever they join two
    /// components. Each non-forest edge `e = (t, h)` yields the circuit that
    /// runs along `e` and back from `h` to `t` through the forest: `+1` on `e`,
    /// and on each forest edge `+1` if traversed forwards, `-1` otherwise.
    /// A loop is its own circuit.
    pub fn spanning_structure(&self) -> SpanningStructure {
        let n = self.vertex_count;
        let mut uf = UnionFind::new(n);
        let mut in_forest = vec![false; self.edges.len()];
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() && uf.union(e.tail, e.head) {
                in_forest[i] = true;
                adjacency[e.tail].push((e.head, i));
                adjacency[e.head].push((e.tail, i));
            }
        }

        // Root each tree at its lowest vertex.
        // up_sign[v]: coefficient of the parent edge when walking v -> parent.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut up_sign: Vec<Int> = vec![0; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &(w, i) in &adjacency[u] {
                    if seen[w] {
                        continue;
                    }
                    seen[w] = true;
                    parent[w] = Some((u, i));
                    up_sign[w] = if self.edges[i].tail == w { 1 } else { -1 };
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }

        let m = self.edges.len();
        let mut chords = Vec::new();
        let mut circuits = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if in_forest[i] {
                continue;
            }
            let mut coeffs = vec![0 as Int; m];
            coeffs[i] = 1;
            // walk h upwards with forward signs, t upwards with reversed signs
            let (mut a, mut b) = (e.head, e.tail);
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, j) = parent[a].expect("non-root has a parent");
                    coeffs[j] += up_sign[a];
                    a = p;
                } else {
                    let (p, j) = parent[b].expect("non-root has a parent");
                    coeffs[j] -= up_sign[b];
                    b = p;
                }
            }
            chords.push(i);
            circuits.push(SignedEdgeVector(coeffs));
        }
        let forest_edges = (0..m).filter(|&i| in_forest[i]).collect();
        SpanningStructure { forest_edges, chords, circuits }
    }
}

/// Disjoint union: vertex and edge indices shifted per part, in order.
pub fn disjoint_union<'a, I>(parts: I) -> MultiDigraph
where
    I: IntoIterator<Item = &'a MultiDigraph>,
{
    let mut out = MultiDigraph::default();
    for part in parts {
        let offset = out.vertex_count;
        out.edges.extend(part.edges.iter().map(|e| Edge::new(e.tail + offset, e.head + offset)));
        out.vertex_count += part.vertex_count;
    }
    out
}

/// A builtin family member: `digon` and `dicycle` take `k >= 1`; `loop`,
/// `k4` and `petersen` take none.
pub fn builtin(name: &str, k: Option<usize>) -> Result<MultiDigraph> {
    let bad = |reason: &str| Error::InvalidBuiltinParameter { name: name.to_string(), reason: reason.to_string() };
    match (name, k) {
        ("digon" | "dicycle", None) => Err(bad("missing parameter k")),
        ("digon" | "dicycle", Some(0)) => Err(bad("k must be at least 1")),
        ("digon", Some(k)) => Ok(MultiDigraph::digon(k)),
        ("dicycle", Some(k)) => Ok(MultiDigraph::dicycle(k)),
        ("loop" | "k4" | "petersen", Some(_)) => Err(bad("takes no parameter")),
        ("loop", None) => Ok(MultiDigraph::single_loop()),
        ("k4", None) => Ok(MultiDigraph::k4()),
        ("petersen", None) => Ok(MultiDigraph::petersen()),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Parses `name[:k]` terms joined by commas into the disjoint union of the
/// builtins, e.g. `digon:9,digon:4`.
pub fn parse_builtin_expr(expr: &str) -> Result<MultiDigraph> {
    let parts = expr
        .split(',')
        .map(|term| {
            let term = term.trim();
            match term.split_once(':') {
                None => builtin(term, None),
                Some((name, k)) => {
                    let k = k.trim().parse().map_err(|_| Error::InvalidBuiltinParameter {
                        name: name.to_string(),
                        reason: format!("`{k}` is not a nonnegative integer"),
                    })?;
                    builtin(name.trim(), Some(k))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(disjoint_union(&parts))
}

/// Parses the text format described in the module docs.
pub fn parse_digraph(text: &str) -> Result<MultiDigraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let pair = |line: usize, l: &str, what: &str| -> Result<(usize, usize)> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse { line, message: format!("`{s}` is not a nonnegative integer") })
        };
        match fields.as_slice() {
            [a, b] => Ok((parse(a)?, parse(b)?)),
            _ => Err(Error::Parse { line, message: format!("expected {what}, got `{l}`") }),
        }
    };

    let (line, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing `V E` header".into() })?;
    let (vertex_count, edge_count) = pair(line, header, "`V E` header")?;
    let mut edges = Vec::with_capacity(edge_count);
    for (line, l) in lines {
        let (tail, head) = pair(line, l, "`tail head`")?;
        for index in [tail, head] {
            if index >= vertex_count {
                return Err(Error::VertexOutOfRange { index, vertex_count });
            }
        }
        edges.push(Edge::new(tail, head));
    }
    if edges.len() != edge_count {
        return Err(Error::EdgeCountMismatch { declared: edge_count, found: edges.len() });
    }
    MultiDigraph::new(vertex_count, edges)
}

impl FromStr for MultiDigraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_digraph(s)
    }
}

impl fmt::Display for MultiDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.vertex_count, self.edges.len())?;
        for e in &self.edges {
            writeln!(f, "{} {}", e.tail, e.head)?;
        }
        Ok(())
    }
}

/// Integer coefficients indexed by edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedEdgeVector(pub Vec<Int>);

impl SignedEdgeVector {
    pub fn zeros(len: usize) -> Self {
        SignedEdgeVector(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Int] {
        &self.0
    }

    pub fn dot(&self, other: &SignedEdgeVector) -> Int {
        assert_eq!(self.len(), other.len(), "dot product of vectors of different length");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl Index<usize> for SignedEdgeVector {
    type Output = Int;
    fn index(&self, i: usize) -> &Int {
        &self.0[i]
    }
}

/// Spanning forest plus one fundamental circuit per non-forest edge, ordered
/// by that edge's index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningStructure {
    forest_edges: Vec<usize>,
    chords: Vec<usize>,
    circuits: Vec<SignedEdgeVector>,
}

impl SpanningStructure {
    /// Forest edge indices, ascending.
    pub fn forest_edges(&self) -> &[usize] {
        &self.forest_edges
    }

    /// The non-forest edge that generates each circuit.
    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    pub fn circuits(&self) -> &[SignedEdgeVector] {
        &self.circuits
    }

    pub fn circuit_count(&self) -> usize {
        self.circuits.len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
