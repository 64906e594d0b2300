//! Group-valued flows and tensions, exhaustive flow enumeration, and
//! nowhere-zero flow counting.

use serde::{Deserialize, Serialize};

use crate::graph::{MultiDigraph, SignedEdgeVector};
use crate::{Error, GroupSpec, Int, Result};

/// One group element per edge, stored flat with `width` coordinates each.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupVector {
    width: usize,
    edges: usize,
    data: Vec<Int>,
}

impl GroupVector {
    pub fn zeros(edge_count: usize, width: usize) -> Self {
        GroupVector { width, edges: edge_count, data: vec![0; edge_count * width] }
    }

    /// Builds a vector from per-edge elements, all of width `width`.
    pub fn from_elements(width: usize, elements: &[Vec<Int>]) -> Result<Self> {
        let mut data = Vec::with_capacity(elements.len() * width);
        for el in elements {
            if el.len() != width {
                return Err(Error::DimensionMismatch { expected: width, found: el.len() });
            }
            data.extend_from_slice(el);
        }
        Ok(GroupVector { width, edges: elements.len(), data })
    }

    /// Same element on every edge.
    pub fn constant(edge_count: usize, element: &[Int]) -> Self {
        GroupVector { width: element.len(), edges: edge_count, data: element.repeat(edge_count) }
    }

    /// Vector over a cyclic group from one residue per edge.
    pub fn cyclic(values: &[Int]) -> Self {
        GroupVector { width: 1, edges: values.len(), data: values.to_vec() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn get(&self, edge: usize) -> &[Int] {
        &self.data[edge * self.width..(edge + 1) * self.width]
    }

    pub fn set(&mut self, edge: usize, element: &[Int]) {
        self.data[edge * self.width..(edge + 1) * self.width].copy_from_slice(element);
    }

    pub fn elements(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.edges).map(|e| self.get(e))
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.elements().all(|el| el.iter().any(|&x| x != 0))
    }
}

fn check_vector(g: &MultiDigraph, phi: &GroupVector, group: &GroupSpec) -> Result<()> {
    if phi.width != group.width() {
        return Err(Error::DimensionMismatch { expected: group.width(), found: phi.width });
    }
    if phi.edges != g.edge_count() {
        return Err(Error::DimensionMismatch { expected: g.edge_count(), found: phi.edges });
    }
    Ok(())
}

/// `+1` on edges leaving `v`, `-1` on edges entering it, `0` elsewhere
/// (loops at `v` included).
pub fn star_tension(g: &MultiDigraph, v: usize) -> Result<SignedEdgeVector> {
    if v >= g.vertex_count() {
        return Err(Error::VertexOutOfRange { index: v, vertex_count: g.vertex_count() });
    }
    Ok(SignedEdgeVector(
        g.edges().iter().map(|e| (e.tail == v) as Int - (e.head == v) as Int).collect(),
    ))
}

/// Kirchhoff's law at every vertex, evaluated in `group`.
///
/// Cyclic coordinates may hold any integer representative.
pub fn is_flow(g: &MultiDigraph, phi: &GroupVector, group: &GroupSpec) -> Result<bool> {
    check_vector(g, phi, group)?;
    Ok(kirchhoff_holds(g, phi, group))
}

/// [`is_flow`] without input validation.
pub(crate) fn kirchhoff_holds(g: &MultiDigraph, phi: &GroupVector, group: &GroupSpec) -> bool {
    let w = group.width();
    let mut excess = vec![0i128; g.vertex_count() * w];
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        for (j, &x) in phi.get(i).iter().enumerate() {
            excess[e.tail * w + j] += x as i128;
            excess[e.head * w + j] -= x as i128;
        }
    }
    excess.iter().enumerate().all(|(k, &s)| group.reduce(k % w, s) == 0)
}

/// Signed sum over every fundamental circuit vanishes in `group`.
///
/// Checking only the fundamental circuits suffices: every circuit vector is
/// an integer combination of them.
pub fn is_tension(g: &MultiDigraph, tau: &GroupVector, group: &GroupSpec) -> Result<bool> {
    check_vector(g, tau, group)?;
    let spanning = g.spanning_structure();
    let w = group.width();
    Ok(spanning.circuits().iter().all(|c| {
        (0..w).all(|j| {
            let s: i128 = c.as_slice().iter().enumerate().map(|(e, &k)| k as i128 * tau.get(e)[j] as i128).sum();
            group.reduce(j, s) == 0
        })
    }))
}

fn budgeted_power(group: &GroupSpec, exponent: usize, budget: u64) -> Result<u128> {
    let order = group.order().ok_or(Error::InfiniteGroup)?;
    let mut needed: u128 = 1;
    for _ in 0..exponent {
        needed = needed.saturating_mul(order);
    }
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Mixed-radix counter over `digits` coordinates, last digit fastest.
#[derive(Debug, Clone)]
struct Odometer {
    radices: Vec<Int>,
    digits: Vec<Int>,
    done: bool,
}

impl Odometer {
    fn new(radices: Vec<Int>) -> Self {
        let done = radices.contains(&0);
        Odometer { digits: vec![0; radices.len()], radices, done }
    }

    fn advance(&mut self) {
        for (d, &r) in self.digits.iter_mut().zip(&self.radices).rev() {
            *d += 1;
            if *d < r {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

fn coordinate_radices(group: &GroupSpec) -> Vec<Int> {
    group.cyclic_orders().iter().map(|&n| n as Int).collect()
}

/// Every flow of `g` over the finite `group`, as the group-coefficient
/// combinations of the fundamental circuits.
///
/// Coefficient tuples run in lexicographic order, circuit 0 most significant
/// and cyclic factors in the order given. Each combination is a distinct flow
/// since every circuit owns its chord.
pub fn enumerate_flows(g: &MultiDigraph, group: &GroupSpec, budget: u64) -> Result<FlowStream> {
    let spanning = g.spanning_structure();
    budgeted_power(group, spanning.circuit_count(), budget)?;
    let radices = coordinate_radices(group).repeat(spanning.circuit_count());
    Ok(FlowStream {
        circuits: spanning.circuits().to_vec(),
        group: group.clone(),
        edge_count: g.edge_count(),
        counter: Odometer::new(radices),
    })
}

#[derive(Debug, Clone)]
pub struct FlowStream {
    circuits: Vec<SignedEdgeVector>,
    group: GroupSpec,
    edge_count: usize,
    counter: Odometer,
}

impl Iterator for FlowStream {
    type Item = GroupVector;

    fn next(&mut self) -> Option<GroupVector> {
        if self.counter.done {
            return None;
        }
        let w = self.group.width();
        let mut phi = GroupVector::zeros(self.edge_count, w);
        let mut acc = vec![0i128; w];
        for e in 0..self.edge_count {
            acc.iter_mut().for_each(|a| *a = 0);
            for (c, circuit) in self.circuits.iter().enumerate() {
                let k = circuit[e] as i128;
                if k != 0 {
                    for (j, a) in acc.iter_mut().enumerate() {
                        *a += k * self.counter.digits[c * w + j] as i128;
                    }
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                phi.data[e * w + j] = self.group.reduce(j, a);
            }
        }
        self.counter.advance();
        Some(phi)
    }
}

/// All `|M|^|E|` vectors filtered by [`is_flow`]. Only useful as an oracle
/// for [`enumerate_flows`].
pub fn filter_flows<'a>(
    g: &'a MultiDigraph,
    group: &'a GroupSpec,
    budget: u64,
) -> Result<impl Iterator<Item = GroupVector> + 'a> {
    budgeted_power(group, g.edge_count(), budget)?;
    let w = group.width();
    let edges = g.edge_count();
    let mut counter = Odometer::new(coordinate_radices(group).repeat(edges));
    let all = std::iter::from_fn(move || {
        if counter.done {
            return None;
        }
        let v = GroupVector { width: w, edges, data: counter.digits.clone() };
        counter.advance();
        Some(v)
    });
    Ok(all.filter(move |v| kirchhoff_holds(g, v, group)))
}

/// Number of flows with no zero entry.
pub fn count_nowhere_zero_flows(g: &MultiDigraph, group: &GroupSpec, budget: u64) -> Result<u64> {
    Ok(enumerate_flows(g, group, budget)?.filter(GroupVector::is_nowhere_zero).count() as u64)
}
