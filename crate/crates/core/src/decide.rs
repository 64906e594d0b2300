//! Deciding flow-continuity of a single edge map.
//!
//! A map `f` is FF over `Z_n` (or `Z`) exactly when the algebraic image of
//! every star tension of `G` is a tension of `H`, i.e. when every entry of
//! the [`DiscrepancyMatrix`] vanishes in that ring. So the whole family of
//! questions collapses to one integer, [`ff_gcd`]: `f` is FF_n iff `n | g`,
//! and FF_Z iff `g = 0`. Other groups reduce to their exponent.
//!
//! [`oracle_is_ff_group`] answers the same question straight from the
//! definition, by pulling back every flow of `H`, and shares none of the
//! tension machinery.

use serde::{Deserialize, Serialize};

use crate::algebra::gcd_all;
use crate::flow::{enumerate_flows, kirchhoff_holds, star_tension};
use crate::graph::{MultiDigraph, SignedEdgeVector};
use crate::{Error, GroupSpec, GroupVector, Int, Modulus, Nat, Result};

/// A total map `E(source) -> E(target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap<'g> {
    source: &'g MultiDigraph,
    target: &'g MultiDigraph,
    assignment: Vec<usize>,
}

impl<'g> EdgeMap<'g> {
    pub fn new(source: &'g MultiDigraph, target: &'g MultiDigraph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.edge_count() {
            return Err(Error::DimensionMismatch { expected: source.edge_count(), found: assignment.len() });
        }
        if let Some(&index) = assignment.iter().find(|&&x| x >= target.edge_count()) {
            return Err(Error::EdgeOutOfRange { index, edge_count: target.edge_count() });
        }
        Ok(EdgeMap { source, target, assignment })
    }

    /// Identity on the edges of `g`.
    pub fn identity(g: &'g MultiDigraph) -> Self {
        EdgeMap { source: g, target: g, assignment: (0..g.edge_count()).collect() }
    }

    /// Every source edge to target edge `image`.
    pub fn constant(source: &'g MultiDigraph, target: &'g MultiDigraph, image: usize) -> Result<Self> {
        Self::new(source, target, vec![image; source.edge_count()])
    }

    pub fn source(&self) -> &'g MultiDigraph {
        self.source
    }

    pub fn target(&self) -> &'g MultiDigraph {
        self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }
}

/// Parses a map file: one target edge index per line, `#` comments allowed.
pub fn parse_assignment(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            l.parse::<usize>()
                .map_err(|_| Error::Parse { line, message: format!("expected one edge index, got `{l}`") })
        })
        .collect()
}

/// Inverse of [`parse_assignment`].
pub fn format_assignment(assignment: &[usize]) -> String {
    assignment.iter().map(|x| format!("{x}\n")).collect()
}

/// Push-forward of `tau` along `f`: each target edge gets the sum over its
/// preimage.
pub fn algebraic_image(f: &EdgeMap<'_>, tau: &SignedEdgeVector) -> Result<SignedEdgeVector> {
    if tau.len() != f.source.edge_count() {
        return Err(Error::DimensionMismatch { expected: f.source.edge_count(), found: tau.len() });
    }
    let mut out = SignedEdgeVector::zeros(f.target.edge_count());
    for (e, &image) in f.assignment.iter().enumerate() {
        out.0[image] += tau[e];
    }
    Ok(out)
}

/// Entry `(v, c)` is the signed sum over fundamental circuit `c` of `H` of
/// the algebraic image of the star tension at `v` in `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl DiscrepancyMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, vertex: usize, circuit: usize) -> Int {
        self.entries[vertex * self.cols + circuit]
    }

    pub fn row(&self, vertex: usize) -> &[Int] {
        &self.entries[vertex * self.cols..(vertex + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Gcd of all entries; `0` iff the matrix is zero.
    pub fn gcd(&self) -> Nat {
        gcd_all(self.entries.iter().map(|x| x.unsigned_abs()))
    }

    /// First entry in row-major order that is nonzero in `modulus`.
    pub fn first_violation(&self, modulus: Modulus) -> Option<FailureCertificate> {
        let k = self.entries.iter().position(|&x| !modulus.annihilates(x))?;
        Some(FailureCertificate {
            vertex: k / self.cols,
            circuit: k % self.cols,
            value: self.entries[k],
            modulus,
        })
    }
}

pub fn discrepancy(f: &EdgeMap<'_>) -> DiscrepancyMatrix {
    let circuits = f.target.spanning_structure();
    let rows = f.source.vertex_count();
    let cols = circuits.circuit_count();
    let mut entries = Vec::with_capacity(rows * cols);
    for v in 0..rows {
        let star = star_tension(f.source, v).expect("vertex in range");
        let image = algebraic_image(f, &star).expect("dimension matches");
        entries.extend(circuits.circuits().iter().map(|c| image.dot(c)));
    }
    DiscrepancyMatrix { rows, cols, entries }
}

/// The integer `g` with: `f` is FF_n iff `n | g`; `g = 0` iff `f` is FF_Z.
pub fn ff_gcd(f: &EdgeMap<'_>) -> Nat {
    discrepancy(f).gcd()
}

/// A star tension whose image fails the circuit condition in `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCertificate {
    pub vertex: usize,
    pub circuit: usize,
    pub value: Int,
    pub modulus: Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Holds,
    Fails(FailureCertificate),
}

impl Decision {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds)
    }

    pub fn certificate(&self) -> Option<&FailureCertificate> {
        match self {
            Decision::Holds => None,
            Decision::Fails(c) => Some(c),
        }
    }
}

/// FF over `Z` or `Z_n`, with a certificate on failure.
pub fn decide(f: &EdgeMap<'_>, modulus: Modulus) -> Decision {
    match discrepancy(f).first_violation(modulus) {
        None => Decision::Holds,
        Some(cert) => Decision::Fails(cert),
    }
}

/// # Panics
/// If `n == 0`.
pub fn is_ff_n(f: &EdgeMap<'_>, n: Nat) -> Decision {
    assert!(n >= 1, "FF_n needs n >= 1");
    decide(f, Modulus::Cyclic(n))
}

pub fn is_ff_z(f: &EdgeMap<'_>) -> bool {
    ff_gcd(f) == 0
}

/// FF over any finitely generated abelian group, via its exponent.
pub fn is_ff_group(f: &EdgeMap<'_>, group: &GroupSpec) -> bool {
    Modulus::from(group.exponent()).divides(ff_gcd(f))
}

/// `phi o f`: the labeling of `E(G)` that reads `phi` through `f`.
pub fn pullback(phi: &GroupVector, f: &EdgeMap<'_>) -> GroupVector {
    let mut out = GroupVector::zeros(f.source.edge_count(), phi.width());
    for (e, &image) in f.assignment.iter().enumerate() {
        out.set(e, phi.get(image));
    }
    out
}

/// The flows of `H` whose pullback is not a flow of `G`, in enumeration order.
pub fn oracle_refuting_flows(f: &EdgeMap<'_>, group: &GroupSpec, budget: u64) -> Result<Vec<GroupVector>> {
    Ok(enumerate_flows(f.target, group, budget)?
        .filter(|phi| !kirchhoff_holds(f.source, &pullback(phi, f), group))
        .collect())
}

/// FF_M straight from the definition: every `M`-flow on `H` pulls back to an
/// `M`-flow on `G`. Needs a finite `group` and `|M|^cyclomatic(H) <= budget`.
pub fn oracle_is_ff_group(f: &EdgeMap<'_>, group: &GroupSpec, budget: u64) -> Result<bool> {
    Ok(enumerate_flows(f.target, group, budget)?.all(|phi| kirchhoff_holds(f.source, &pullback(&phi, f), group)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn algebraic_image_examples() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        let bij = EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap();
        let ones = SignedEdgeVector(vec![1, 1, 1]);
        assert_eq!(algebraic_image(&bij, &ones).unwrap(), ones);

        let (d9, d7) = (MultiDigraph::digon(9), MultiDigraph::digon(7));
        let constant = EdgeMap::constant(&d9, &d7, 0).unwrap();
        let image = algebraic_image(&constant, &SignedEdgeVector(vec![1; 9])).unwrap();
        assert_eq!(image.as_slice(), &[9, 0, 0, 0, 0, 0, 0]);
        assert!(algebraic_image(&constant, &SignedEdgeVector::zeros(9)).unwrap().is_zero());
        assert!(algebraic_image(&constant, &SignedEdgeVector::zeros(8)).is_err());
    }

    #[test]
    fn edge_map_validation() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        assert!(matches!(EdgeMap::new(&d3, &c3, vec![0, 1]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(EdgeMap::new(&d3, &c3, vec![0, 1, 3]), Err(Error::EdgeOutOfRange { index: 3, .. })));
    }

    #[test]
    fn discrepancy_examples() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        let bij = EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap();
        let m = discrepancy(&bij);
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert_eq!(m.entries(), &[3, -3]);

        for g in [MultiDigraph::k4(), MultiDigraph::petersen(), MultiDigraph::digon(5), MultiDigraph::single_loop()] {
            assert!(discrepancy(&EdgeMap::identity(&g)).is_zero());
        }

        let (d9, d7) = (MultiDigraph::digon(9), MultiDigraph::digon(7));
        let m = discrepancy(&EdgeMap::constant(&d9, &d7, 0).unwrap());
        assert_eq!(m.row(0), &[-9; 6]);
        assert_eq!(m.row(1), &[9; 6]);
    }

    #[test]
    fn gcd_examples() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        assert_eq!(ff_gcd(&EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap()), 3);
        let (k4, trigon) = (MultiDigraph::k4(), MultiDigraph::digon(3));
        assert_eq!(ff_gcd(&EdgeMap::new(&k4, &trigon, vec![0, 1, 2, 2, 1, 0]).unwrap()), 2);
        let (d6, lp) = (MultiDigraph::digon(6), MultiDigraph::single_loop());
        assert_eq!(ff_gcd(&EdgeMap::constant(&d6, &lp, 0).unwrap()), 6);
    }

    #[test]
    fn decision_examples() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        let bij = EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap();
        assert!(is_ff_n(&bij, 3).holds());
        let cert = *is_ff_n(&bij, 2).certificate().unwrap();
        assert_eq!(cert, FailureCertificate { vertex: 0, circuit: 0, value: 3, modulus: Modulus::Cyclic(2) });
        assert!(is_ff_n(&bij, 1).holds());
        assert!(!is_ff_z(&bij));
        assert_eq!(decide(&bij, Modulus::Integers).certificate().unwrap().value, 3);

        assert!(is_ff_z(&EdgeMap::identity(&c3)));
        let (d9, d7) = (MultiDigraph::digon(9), MultiDigraph::digon(7));
        assert!(!is_ff_z(&EdgeMap::constant(&d9, &d7, 0).unwrap()));
    }

    #[test]
    fn group_dispatch() {
        let (k4, trigon) = (MultiDigraph::k4(), MultiDigraph::digon(3));
        let coloring = EdgeMap::new(&k4, &trigon, vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert!(is_ff_group(&coloring, &"Z2xZ2".parse().unwrap()));
        assert!(!is_ff_group(&coloring, &zn(3)));
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        let bij = EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap();
        assert!(!is_ff_group(&bij, &GroupSpec::integers()));
        assert!(is_ff_group(&bij, &GroupSpec::trivial()));
        assert!(is_ff_group(&bij, &"Z3xZ3".parse().unwrap()));
    }

    #[test]
    fn oracle_examples() {
        let (d3, c3) = (MultiDigraph::digon(3), MultiDigraph::dicycle(3));
        let bij = EdgeMap::new(&d3, &c3, vec![0, 1, 2]).unwrap();
        assert!(oracle_is_ff_group(&bij, &zn(3), 1000).unwrap());
        assert!(!oracle_is_ff_group(&bij, &zn(2), 1000).unwrap());

        let (k4, trigon) = (MultiDigraph::k4(), MultiDigraph::digon(3));
        let coloring = EdgeMap::new(&k4, &trigon, vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert!(!oracle_is_ff_group(&coloring, &zn(3), 1000).unwrap());
        assert!(oracle_refuting_flows(&coloring, &zn(3), 1000).unwrap().contains(&GroupVector::cyclic(&[1, 1, 1])));
        assert!(oracle_is_ff_group(&coloring, &zn(2), 1000).unwrap());

        // H a forest: only the zero flow, which always pulls back
        let path = MultiDigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let f = EdgeMap::constant(&d3, &path, 1).unwrap();
        assert!(oracle_is_ff_group(&f, &zn(2), 10).unwrap());
        assert!(oracle_is_ff_group(&bij, &GroupSpec::integers(), 10).is_err());
    }

    #[test]
    fn edgeless_source_is_ff_everywhere() {
        let (g, h) = (MultiDigraph::edgeless(3), MultiDigraph::digon(2));
        let f = EdgeMap::new(&g, &h, vec![]).unwrap();
        assert_eq!(ff_gcd(&f), 0);
        assert!(oracle_is_ff_group(&f, &zn(5), 10).unwrap());
    }

    #[test]
    fn map_file_format() {
        assert_eq!(parse_assignment("# map\n0\n2 # comment\n\n1\n").unwrap(), vec![0, 2, 1]);
        assert!(matches!(parse_assignment("0\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_assignment(&format_assignment(&[4, 0, 3])).unwrap(), vec![4, 0, 3]);
    }
}
