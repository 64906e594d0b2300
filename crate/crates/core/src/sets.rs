//! The divisor ideals `FF(f, G, H)` and `FF(G, H)`, FF-map counting and
//! witness search.
//!
//! Graph-level questions enumerate maps exhaustively. The search runs
//! separately on each connected component of `G`: the condition at a vertex
//! only involves the images of its own edges, so a map is FF_n exactly when
//! each of its restrictions to a component is. Within a component, rows of
//! the discrepancy matrix are folded into a running gcd as soon as their
//! vertex has all incident edges assigned, and subtrees are cut when that gcd
//! (or a still-open row) rules out every completion.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::divisors;
use crate::decide::{ff_gcd, oracle_is_ff_group, EdgeMap};
use crate::graph::MultiDigraph;
use crate::{Error, GroupSpec, Int, Modulus, Nat, Result};

/// A divisor down-set of the positive integers: either all of `N`, or the
/// set of divisors of some element of a finite antichain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FfSet {
    AllOfN,
    Finite { maximal_elements: BTreeSet<Nat> },
}

impl FfSet {
    pub fn empty() -> Self {
        FfSet::Finite { maximal_elements: BTreeSet::new() }
    }

    /// Divisors of `g`, or all of `N` when `g = 0`.
    pub fn divisors_of(g: Nat) -> Self {
        if g == 0 {
            FfSet::AllOfN
        } else {
            FfSet::Finite { maximal_elements: [g].into() }
        }
    }

    /// Down-closure of `generators` (a `0` means all of `N`).
    pub fn down_closure<I: IntoIterator<Item = Nat>>(generators: I) -> Self {
        let mut out = FfSet::empty();
        for g in generators {
            out.insert(g);
        }
        out
    }

    pub fn is_all(&self) -> bool {
        matches!(self, FfSet::AllOfN)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FfSet::Finite { maximal_elements } if maximal_elements.is_empty())
    }

    pub fn contains(&self, n: Nat) -> bool {
        match self {
            FfSet::AllOfN => n >= 1,
            FfSet::Finite { maximal_elements } => n >= 1 && maximal_elements.iter().any(|m| m % n == 0),
        }
    }

    /// Maximal elements under divisibility; `None` for all of `N`.
    pub fn maximal_elements(&self) -> Option<&BTreeSet<Nat>> {
        match self {
            FfSet::AllOfN => None,
            FfSet::Finite { maximal_elements } => Some(maximal_elements),
        }
    }

    /// All members ascending; `None` for all of `N`.
    pub fn members(&self) -> Option<Vec<Nat>> {
        let maxima = self.maximal_elements()?;
        let mut all: BTreeSet<Nat> = BTreeSet::new();
        for &m in maxima {
            all.extend(divisors(m).expect("maximal elements are positive"));
        }
        Some(all.into_iter().collect())
    }

    /// Adds the divisors of `g` (all of `N` when `g = 0`).
    pub fn insert(&mut self, g: Nat) {
        let FfSet::Finite { maximal_elements } = self else {
            return;
        };
        if g == 0 {
            *self = FfSet::AllOfN;
            return;
        }
        if maximal_elements.iter().any(|m| m % g == 0) {
            return;
        }
        maximal_elements.retain(|m| !g.is_multiple_of(*m));
        maximal_elements.insert(g);
    }

    pub fn union(&self, other: &FfSet) -> FfSet {
        match other {
            FfSet::AllOfN => FfSet::AllOfN,
            FfSet::Finite { maximal_elements } => {
                let mut out = self.clone();
                for &m in maximal_elements {
                    out.insert(m);
                }
                out
            }
        }
    }

    pub fn intersection(&self, other: &FfSet) -> FfSet {
        match (self, other) {
            (FfSet::AllOfN, x) | (x, FfSet::AllOfN) => x.clone(),
            (FfSet::Finite { maximal_elements: a }, FfSet::Finite { maximal_elements: b }) => {
                let mut out = FfSet::empty();
                for x in a {
                    for y in b {
                        out.insert(x.gcd(y));
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for FfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.members() {
            None => write!(f, "all n"),
            Some(ms) => {
                let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                write!(f, "{{{}}}", ms.join(", "))
            }
        }
    }
}

/// Result of an existence search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { assignment: Vec<usize> },
    NoneExists,
    Unknown { needed: u128, budget: u64 },
}

/// `FF(f, G, H)` from the discrepancy gcd.
pub fn ff_set_of_map(f: &EdgeMap<'_>) -> FfSet {
    FfSet::divisors_of(ff_gcd(f))
}

/// Enumeration-based search over the maps of one edge subset of `G`.
struct Kernel {
    target_edges: usize,
    cols: usize,
    /// per target edge, its nonzero circuit coefficients
    columns: Vec<Vec<(usize, Int)>>,
    /// global indices of the source edges, ascending
    edges: Vec<usize>,
    /// per position: local tail/head, or `None` for a loop
    ends: Vec<Option<(usize, usize)>>,
    /// per position: incident non-loop edges still unassigned afterwards
    remaining: Vec<(usize, usize)>,
    vertices: usize,
}

impl Kernel {
    fn new(g: &MultiDigraph, h: &MultiDigraph, edges: Vec<usize>) -> Self {
        let spanning = h.spanning_structure();
        let cols = spanning.circuit_count();
        let mut columns = vec![Vec::new(); h.edge_count()];
        for (c, circuit) in spanning.circuits().iter().enumerate() {
            for (e, &k) in circuit.as_slice().iter().enumerate() {
                if k != 0 {
                    columns[e].push((c, k));
                }
            }
        }
        let mut local = vec![usize::MAX; g.vertex_count()];
        let mut vertices = 0;
        let mut ends = Vec::with_capacity(edges.len());
        for &i in &edges {
            let e = g.edge(i);
            if e.is_loop() {
                ends.push(None);
                continue;
            }
            for v in [e.tail, e.head] {
                if local[v] == usize::MAX {
                    local[v] = vertices;
                    vertices += 1;
                }
            }
            ends.push(Some((local[e.tail], local[e.head])));
        }
        let mut left = vec![0usize; vertices];
        for &(t, h) in ends.iter().flatten() {
            left[t] += 1;
            left[h] += 1;
        }
        let remaining = ends
            .iter()
            .map(|end| match *end {
                Some((t, h)) => {
                    left[t] -= 1;
                    left[h] -= 1;
                    (left[t], left[h])
                }
                None => (usize::MAX, usize::MAX),
            })
            .collect();
        Kernel { target_edges: h.edge_count(), cols, columns, edges, ends, remaining, vertices }
    }

    fn space(&self) -> u128 {
        (0..self.edges.len()).fold(1u128, |acc, _| acc.saturating_mul(self.target_edges as u128))
    }

    fn fresh_state(&self) -> State {
        State { acc: vec![0; self.vertices * self.cols], g: 0, assignment: vec![0; self.edges.len()] }
    }

    /// Assigns position `pos` to target `x` and reports the new closed-row gcd,
    /// or `None` if the visitor rules the subtree out.
    fn assign<V: Visitor>(&self, pos: usize, x: usize, state: &mut State, visitor: &V) -> Option<Nat> {
        state.assignment[pos] = x;
        let Some((t, h)) = self.ends[pos] else {
            return Some(state.g);
        };
        let cols = self.cols;
        for &(c, k) in &self.columns[x] {
            state.acc[t * cols + c] += k;
            state.acc[h * cols + c] -= k;
        }
        let (rt, rh) = self.remaining[pos];
        let mut g = state.g;
        let mut ok = true;
        for (v, r) in [(t, rt), (h, rh)] {
            let row = &state.acc[v * cols..(v + 1) * cols];
            if r == 0 {
                g = row.iter().fold(g, |acc, x| acc.gcd(&x.unsigned_abs()));
            } else if !visitor.open_row_feasible(row, r as Int) {
                ok = false;
            }
        }
        (ok && !visitor.prune(g)).then_some(g)
    }

    fn unassign(&self, pos: usize, state: &mut State) {
        if let Some((t, h)) = self.ends[pos] {
            let cols = self.cols;
            for &(c, k) in &self.columns[state.assignment[pos]] {
                state.acc[t * cols + c] -= k;
                state.acc[h * cols + c] += k;
            }
        }
    }

    fn dfs<V: Visitor>(&self, pos: usize, state: &mut State, visitor: &mut V) -> ControlFlow<()> {
        if pos == self.edges.len() {
            return visitor.leaf(state.g, &state.assignment);
        }
        for x in 0..self.target_edges {
            let saved = state.g;
            if let Some(g) = self.assign(pos, x, state, visitor) {
                state.g = g;
                let flow = self.dfs(pos + 1, state, visitor);
                state.g = saved;
                if flow.is_break() {
                    self.unassign(pos, state);
                    return flow;
                }
            }
            self.unassign(pos, state);
        }
        ControlFlow::Continue(())
    }

    /// Runs one visitor per image of the first edge, in parallel; results in
    /// image order.
    fn run_split<V, F>(&self, make: F) -> Vec<V>
    where
        V: Visitor + Send,
        F: Fn() -> V + Sync,
    {
        if self.edges.is_empty() {
            let mut v = make();
            let _ = v.leaf(0, &[]);
            return vec![v];
        }
        (0..self.target_edges)
            .into_par_iter()
            .map(|x| {
                let mut visitor = make();
                let mut state = self.fresh_state();
                if let Some(g) = self.assign(0, x, &mut state, &visitor) {
                    state.g = g;
                    let _ = self.dfs(1, &mut state, &mut visitor);
                }
                visitor
            })
            .collect()
    }
}

struct State {
    acc: Vec<Int>,
    g: Nat,
    assignment: Vec<usize>,
}

trait Visitor {
    /// Whether no completion of a partial map whose closed rows have gcd `g`
    /// can matter.
    fn prune(&self, g: Nat) -> bool;
    /// Whether an open row can still be fixed by `remaining` more edges, each
    /// moving every entry by at most one.
    fn open_row_feasible(&self, row: &[Int], remaining: Int) -> bool;
    fn leaf(&mut self, g: Nat, assignment: &[usize]) -> ControlFlow<()>;
}

struct SetCollector<'a> {
    found: FfSet,
    saturated: &'a AtomicBool,
}

impl Visitor for SetCollector<'_> {
    fn prune(&self, g: Nat) -> bool {
        self.saturated.load(Ordering::Relaxed) || (g != 0 && self.found.contains(g))
    }

    fn open_row_feasible(&self, _: &[Int], _: Int) -> bool {
        true
    }

    fn leaf(&mut self, g: Nat, _: &[usize]) -> ControlFlow<()> {
        self.found.insert(g);
        if g == 0 {
            self.saturated.store(true, Ordering::Relaxed);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

/// Maps whose gcd is divisible by a fixed modulus: first witness or count.
struct ModulusFilter {
    modulus: Modulus,
    stop_at_first: bool,
    count: u128,
    first: Option<Vec<usize>>,
}

impl ModulusFilter {
    fn new(modulus: Modulus, stop_at_first: bool) -> Self {
        ModulusFilter { modulus, stop_at_first, count: 0, first: None }
    }
}

impl Visitor for ModulusFilter {
    fn prune(&self, g: Nat) -> bool {
        !self.modulus.divides(g)
    }

    fn open_row_feasible(&self, row: &[Int], remaining: Int) -> bool {
        match self.modulus {
            Modulus::Integers => row.iter().all(|x| x.abs() <= remaining),
            Modulus::Cyclic(n) => {
                let n = n as i128;
                row.iter().all(|&x| {
                    let m = (x as i128).rem_euclid(n);
                    m <= remaining as i128 || n - m <= remaining as i128
                })
            }
        }
    }

    fn leaf(&mut self, _: Nat, assignment: &[usize]) -> ControlFlow<()> {
        self.count += 1;
        if self.first.is_none() {
            self.first = Some(assignment.to_vec());
        }
        if self.stop_at_first {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }
}

/// Visits every map and tallies FF_n against FF_Z.
struct SubcubicTally<'a> {
    moduli: &'a [Nat],
    checked: u128,
    ff_z: u128,
    violations: Vec<SubcubicViolation>,
}

impl Visitor for SubcubicTally<'_> {
    fn prune(&self, _: Nat) -> bool {
        false
    }

    fn open_row_feasible(&self, _: &[Int], _: Int) -> bool {
        true
    }

    fn leaf(&mut self, g: Nat, assignment: &[usize]) -> ControlFlow<()> {
        self.checked += 1;
        let ff_z = g == 0;
        self.ff_z += ff_z as u128;
        for &n in self.moduli {
            let ff_n = g.is_multiple_of(n);
            if ff_n != ff_z {
                self.violations.push(SubcubicViolation { assignment: assignment.to_vec(), n, ff_n, ff_z });
            }
        }
        ControlFlow::Continue(())
    }
}

fn component_kernels(g: &MultiDigraph, h: &MultiDigraph, budget: u64) -> Result<Vec<Kernel>> {
    let kernels: Vec<Kernel> = g.edge_components().into_iter().map(|edges| Kernel::new(g, h, edges)).collect();
    let needed = kernels.iter().fold(0u128, |acc, k| acc.saturating_add(k.space()));
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(kernels)
}

fn whole_kernel(g: &MultiDigraph, h: &MultiDigraph, budget: u64) -> Result<Kernel> {
    let kernel = Kernel::new(g, h, (0..g.edge_count()).collect());
    let needed = kernel.space();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(kernel)
}

/// `FF(G, H)`: the union of `FF(f, G, H)` over all maps `f`.
///
/// `budget` bounds the number of maps examined, summed over the components
/// of `G`.
pub fn ff_set_of_graphs(g: &MultiDigraph, h: &MultiDigraph, budget: u64) -> Result<FfSet> {
    let kernels = component_kernels(g, h, budget)?;
    let mut out = FfSet::AllOfN;
    for kernel in &kernels {
        let saturated = AtomicBool::new(false);
        let part = kernel
            .run_split(|| SetCollector { found: FfSet::empty(), saturated: &saturated })
            .into_iter()
            .fold(FfSet::empty(), |acc, v| acc.union(&v.found));
        out = out.intersection(&part);
        if out.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Number of maps `E(G) -> E(H)` that are FF over `group`.
pub fn count_ff_maps(g: &MultiDigraph, h: &MultiDigraph, group: &GroupSpec, budget: u64) -> Result<u128> {
    let modulus = Modulus::from(group.exponent());
    let kernels = component_kernels(g, h, budget)?;
    let mut total: u128 = 1;
    for kernel in &kernels {
        let count: u128 = kernel.run_split(|| ModulusFilter::new(modulus, false)).iter().map(|v| v.count).sum();
        total = total.checked_mul(count).ok_or(Error::Overflow("count_ff_maps"))?;
    }
    Ok(total)
}

/// All assignments `E(G) -> E(H)` in lexicographic order.
pub fn all_assignments(g: &MultiDigraph, h: &MultiDigraph) -> impl Iterator<Item = Vec<usize>> {
    let (m, k) = (g.edge_count(), h.edge_count());
    let mut next = (m == 0 || k > 0).then(|| vec![0usize; m]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for pos in (0..m).rev() {
            succ[pos] += 1;
            if succ[pos] < k {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    })
}

/// [`count_ff_maps`] recomputed with the definitional oracle on every map.
/// Needs a finite group; `map_budget` caps `|E(H)|^|E(G)|` and `flow_budget`
/// is passed to each oracle call.
pub fn count_ff_maps_oracle(
    g: &MultiDigraph,
    h: &MultiDigraph,
    group: &GroupSpec,
    map_budget: u64,
    flow_budget: u64,
) -> Result<u128> {
    whole_kernel(g, h, map_budget)?;
    let mut count = 0;
    for assignment in all_assignments(g, h) {
        let f = EdgeMap::new(g, h, assignment)?;
        if oracle_is_ff_group(&f, group, flow_budget)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Lexicographically first map that is FF over `modulus`, if any.
pub fn exists_ff_map(g: &MultiDigraph, h: &MultiDigraph, modulus: Modulus, budget: u64) -> SearchOutcome {
    let kernels = match component_kernels(g, h, budget) {
        Ok(k) => k,
        Err(Error::BudgetExceeded { needed, budget }) => return SearchOutcome::Unknown { needed, budget },
        Err(e) => unreachable!("component_kernels only fails on budget: {e}"),
    };
    let mut assignment = vec![0usize; g.edge_count()];
    for kernel in &kernels {
        let witness = kernel.run_split(|| ModulusFilter::new(modulus, true)).into_iter().find_map(|v| v.first);
        let Some(local) = witness else {
            return SearchOutcome::NoneExists;
        };
        for (&global, x) in kernel.edges.iter().zip(local) {
            assignment[global] = x;
        }
    }
    SearchOutcome::Found { assignment }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcubicViolation {
    pub assignment: Vec<usize>,
    pub n: Nat,
    pub ff_n: bool,
    pub ff_z: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcubicReport {
    pub moduli: Vec<Nat>,
    pub maps_checked: u128,
    pub ff_z_maps: u128,
    pub violations: Vec<SubcubicViolation>,
}

/// Checks, for every map and every `n` in `moduli`, that FF_n and FF_Z agree.
///
/// Only sound when every vertex of `G` has degree below `min(moduli)`; the
/// check refuses to run otherwise.
pub fn subcubic_equivalence_check(
    g: &MultiDigraph,
    h: &MultiDigraph,
    moduli: &[Nat],
    budget: u64,
) -> Result<SubcubicReport> {
    let bound = *moduli.iter().min().ok_or(Error::InvalidArgument("empty modulus range".into()))?;
    if bound == 0 {
        return Err(Error::InvalidArgument("moduli must be positive".into()));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) as u128 >= bound as u128) {
        return Err(Error::DegreeTooHigh { vertex: v, degree: g.degree(v), bound });
    }
    let kernel = whole_kernel(g, h, budget)?;
    let branches =
        kernel.run_split(|| SubcubicTally { moduli, checked: 0, ff_z: 0, violations: Vec::new() });
    let mut report = SubcubicReport { moduli: moduli.to_vec(), maps_checked: 0, ff_z_maps: 0, violations: Vec::new() };
    for branch in branches {
        report.maps_checked += branch.checked;
        report.ff_z_maps += branch.ff_z;
        report.violations.extend(branch.violations);
    }
    Ok(report)
}
