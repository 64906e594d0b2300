//! Digon families and witness pairs for prescribed divisor down-sets.
//!
//! For unions of digons `G = U_{a in A} D_a` and `H = U_{b in B} D_b` there
//! is an FF_n map `G -> H` iff every `a in A` lies in the integer cone of
//! `B + {n}`, and an FF_Z map iff every `a` lies in the cone of `B`. That
//! turns `FF(G, H)` into a finite cone scan.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{cone_member, next_prime_above};
use crate::decide::{ff_gcd, EdgeMap};
use crate::graph::{disjoint_union, MultiDigraph};
use crate::sets::{ff_set_of_graphs, FfSet};
use crate::{Error, Nat, Result};

/// A nonempty set of digon multiplicities, realized as the disjoint union of
/// the digons in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Nat>", into = "Vec<Nat>")]
pub struct DigonFamily(BTreeSet<Nat>);

impl TryFrom<Vec<Nat>> for DigonFamily {
    type Error = Error;
    fn try_from(v: Vec<Nat>) -> Result<Self> {
        DigonFamily::new(v)
    }
}

impl From<DigonFamily> for Vec<Nat> {
    fn from(f: DigonFamily) -> Self {
        f.0.into_iter().collect()
    }
}

impl DigonFamily {
    pub fn new<I: IntoIterator<Item = Nat>>(multiplicities: I) -> Result<Self> {
        let set: BTreeSet<Nat> = multiplicities.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidArgument("a digon family needs at least one digon".into()));
        }
        if set.contains(&0) {
            return Err(Error::InvalidArgument("digon multiplicities must be positive".into()));
        }
        Ok(DigonFamily(set))
    }

    pub fn multiplicities(&self) -> &BTreeSet<Nat> {
        &self.0
    }

    pub fn max(&self) -> Nat {
        *self.0.last().expect("nonempty")
    }

    pub fn to_graph(&self) -> MultiDigraph {
        let parts: Vec<MultiDigraph> = self.0.iter().map(|&k| MultiDigraph::digon(k as usize)).collect();
        disjoint_union(&parts)
    }

    /// Reads a graph as a digon family: every component with edges must be
    /// two vertices joined by parallel edges all pointing the same way.
    /// Isolated vertices are ignored; repeated multiplicities collapse.
    pub fn recognize(g: &MultiDigraph) -> Option<DigonFamily> {
        let mut sizes = Vec::new();
        for component in g.edge_components() {
            let first = g.edge(component[0]);
            if first.is_loop() || component.iter().any(|&i| g.edge(i) != first) {
                return None;
            }
            sizes.push(component.len() as Nat);
        }
        DigonFamily::new(sizes).ok()
    }
}

/// `FF(G, H)` for digon unions, by cone membership.
///
/// For `n > max(A)` the extra generator can never be used, so membership of
/// such `n` coincides with the FF_Z case and scanning `1..=max(A)` is exact.
pub fn ff_set_digons(a: &DigonFamily, b: &DigonFamily) -> FfSet {
    let base: Vec<Nat> = b.0.iter().copied().collect();
    if a.0.iter().all(|&x| cone_member(x, &base)) {
        return FfSet::AllOfN;
    }
    let mut gens = base;
    gens.push(0);
    let last = gens.len() - 1;
    let members = (1..=a.max()).filter(|&n| {
        gens[last] = n;
        a.0.iter().all(|&x| cone_member(x, &gens))
    });
    FfSet::down_closure(members.collect::<Vec<_>>())
}

/// `a = sum(terms) + multiple * n` with every term in `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub terms: Vec<Nat>,
    pub multiple: Nat,
}

/// Decomposition of `a` over `B + {n}` with the fewest `B` terms, ties broken
/// by the lexicographically smallest ascending term list.
pub fn decompose(a: Nat, b: &DigonFamily, n: Nat) -> Option<Decomposition> {
    assert!(n >= 1, "modulus must be positive");
    let a_idx = a as usize;
    // best[v]: preferred ascending multiset of B summing to v
    let mut best: Vec<Option<Vec<Nat>>> = vec![None; a_idx + 1];
    best[0] = Some(Vec::new());
    for v in 1..=a_idx {
        for &term in &b.0 {
            let t = term as usize;
            if t > v {
                break;
            }
            let Some(prev) = &best[v - t] else { continue };
            let mut cand = prev.clone();
            let at = cand.partition_point(|&x| x <= term);
            cand.insert(at, term);
            if better(&cand, best[v].as_ref()) {
                best[v] = Some(cand);
            }
        }
    }
    let mut chosen: Option<(Vec<Nat>, Nat)> = None;
    for v in 0..=a_idx {
        if !(a - v as Nat).is_multiple_of(n) {
            continue;
        }
        if let Some(terms) = &best[v] {
            if better(terms, chosen.as_ref().map(|(t, _)| t)) {
                chosen = Some((terms.clone(), (a - v as Nat) / n));
            }
        }
    }
    chosen.map(|(terms, multiple)| Decomposition { terms, multiple })
}

fn better(cand: &[Nat], incumbent: Option<&Vec<Nat>>) -> bool {
    match incumbent {
        None => true,
        Some(inc) => (cand.len(), cand) < (inc.len(), inc.as_slice()),
    }
}

/// An explicit map between two digon unions, owning both graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigonMap {
    pub source: MultiDigraph,
    pub target: MultiDigraph,
    pub assignment: Vec<usize>,
}

impl DigonMap {
    pub fn edge_map(&self) -> EdgeMap<'_> {
        EdgeMap::new(&self.source, &self.target, self.assignment.clone()).expect("constructed maps are total")
    }
}

/// The cone-based FF_n map from `U D_a` to `U D_b`.
///
/// For each `a`, its lowest `multiple * n` edges go to target edge 0 and the
/// following blocks of `b_i` edges go bijectively onto `D_{b_i}`.
pub fn digon_ff_map(a: &DigonFamily, b: &DigonFamily, n: Nat) -> Result<DigonMap> {
    let source = a.to_graph();
    let target = b.to_graph();
    let mut offsets = std::collections::BTreeMap::new();
    let mut next = 0usize;
    for &k in &b.0 {
        offsets.insert(k, next);
        next += k as usize;
    }
    let mut assignment = Vec::with_capacity(source.edge_count());
    for &x in &a.0 {
        let d = decompose(x, b, n).ok_or_else(|| Error::ConeViolation {
            a: x,
            generators: b.0.iter().copied().chain([n]).collect(),
        })?;
        assignment.extend(std::iter::repeat_n(0, (d.multiple * n) as usize));
        for term in d.terms {
            let start = offsets[&term];
            assignment.extend(start..start + term as usize);
        }
    }
    let map = DigonMap { source, target, assignment };
    let g = ff_gcd(&map.edge_map());
    debug_assert_eq!(g % n, 0, "constructed map must be FF_{n}");
    if !g.is_multiple_of(n) {
        return Err(Error::InvalidArgument(format!("constructed map has gcd {g}, not divisible by {n}")));
    }
    Ok(map)
}

/// Parameters of the digon pair realizing the down-closure of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPlan {
    /// maximal elements of the requested down-set, ascending
    pub t: Vec<Nat>,
    pub p: Option<Nat>,
    pub p_prime: Option<Nat>,
    pub a: Vec<Nat>,
    pub b: Vec<Nat>,
}

impl WitnessPlan {
    pub fn source_family(&self) -> Option<DigonFamily> {
        DigonFamily::new(self.a.iter().copied()).ok()
    }

    pub fn target_family(&self) -> Option<DigonFamily> {
        DigonFamily::new(self.b.iter().copied()).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub source: MultiDigraph,
    pub target: MultiDigraph,
    pub plan: WitnessPlan,
}

/// Builds `G, H` with `FF(G, H)` equal to the divisor down-closure of `t`.
///
/// With `t` empty, `G` is a single edge and `H` is edgeless. Otherwise `p` is
/// the least prime above `4 max t`, `p'` the least integer above `1.25 p`,
/// `A = {p, p'}` and `B = {p - s, p' - s : s in t}`.
pub fn build_witness(t: &[Nat]) -> Result<Witness> {
    if t.contains(&0) {
        return Err(Error::InvalidArgument("elements of T must be positive".into()));
    }
    let normalized = FfSet::down_closure(t.iter().copied());
    let t: Vec<Nat> = normalized.maximal_elements().expect("finite").iter().copied().collect();
    let Some(&max_t) = t.last() else {
        let plan = WitnessPlan { t, p: None, p_prime: None, a: Vec::new(), b: Vec::new() };
        return Ok(Witness { source: MultiDigraph::digon(1), target: MultiDigraph::edgeless(1), plan });
    };
    let p = next_prime_above(max_t.checked_mul(4).ok_or(Error::Overflow("build_witness"))?)?;
    let p_prime = p.checked_mul(5).ok_or(Error::Overflow("build_witness"))? / 4 + 1;
    if 2 * p_prime as u128 >= 3 * p as u128 {
        return Err(Error::InvalidArgument(format!("no integer strictly between 1.25*{p} and 1.5*{p}")));
    }
    let a = DigonFamily::new([p, p_prime])?;
    let b = DigonFamily::new(t.iter().flat_map(|&s| [p - s, p_prime - s]))?;
    if let Some(&small) = b.0.iter().find(|&&x| 4 * x as u128 <= 3 * p as u128) {
        return Err(Error::InvalidArgument(format!("{small} in B is not above 3p/4")));
    }
    let plan = WitnessPlan {
        t,
        p: Some(p),
        p_prime: Some(p_prime),
        a: a.0.iter().copied().collect(),
        b: b.0.iter().copied().collect(),
    };
    Ok(Witness { source: a.to_graph(), target: b.to_graph(), plan })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub expected: FfSet,
    pub computed: FfSet,
    pub passed: bool,
}

/// Recomputes `FF(G, H)` for a plan and compares it with the down-closure of `t`.
pub fn verify_witness(plan: &WitnessPlan) -> Result<WitnessReport> {
    let expected = FfSet::down_closure(plan.t.iter().copied());
    let computed = match (plan.source_family(), plan.target_family()) {
        (Some(a), Some(b)) => ff_set_digons(&a, &b),
        _ if plan.t.is_empty() => ff_set_of_graphs(&MultiDigraph::digon(1), &MultiDigraph::edgeless(1), 1)?,
        _ => return Err(Error::InvalidArgument("plan has no digon families".into())),
    };
    Ok(WitnessReport { passed: expected == computed, expected, computed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(xs: &[Nat]) -> DigonFamily {
        DigonFamily::new(xs.iter().copied()).unwrap()
    }

    #[test]
    fn cone_scan_examples() {
        assert_eq!(ff_set_digons(&fam(&[9]), &fam(&[7])).members().unwrap(), vec![1, 2, 3, 9]);
        assert_eq!(ff_set_digons(&fam(&[9]), &fam(&[7])).maximal_elements().unwrap(), &[2, 9].into());
        assert!(ff_set_digons(&fam(&[6]), &fam(&[2])).is_all());
        assert_eq!(ff_set_digons(&fam(&[4]), &fam(&[3])).members().unwrap(), vec![1, 2, 4]);
    }

    #[test]
    fn decomposition_preferences() {
        assert_eq!(decompose(9, &fam(&[7]), 2), Some(Decomposition { terms: vec![7], multiple: 1 }));
        assert_eq!(decompose(9, &fam(&[7]), 3), Some(Decomposition { terms: vec![], multiple: 3 }));
        assert_eq!(decompose(9, &fam(&[7]), 6), None);
        // 10 = 4 + 6 or 5 + 5 with n = 7: both two terms, [4, 6] is smaller
        assert_eq!(decompose(10, &fam(&[4, 5, 6]), 7), Some(Decomposition { terms: vec![4, 6], multiple: 0 }));
        assert_eq!(decompose(12, &fam(&[5]), 1), Some(Decomposition { terms: vec![], multiple: 12 }));
    }

    #[test]
    fn digon_maps() {
        let m = digon_ff_map(&fam(&[9]), &fam(&[7]), 2).unwrap();
        assert_eq!(m.assignment, vec![0, 0, 0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(ff_gcd(&m.edge_map()) % 2, 0);
        let m = digon_ff_map(&fam(&[9]), &fam(&[7]), 3).unwrap();
        assert_eq!(m.assignment, vec![0; 9]);
        assert_eq!(ff_gcd(&m.edge_map()), 9);
        assert!(matches!(digon_ff_map(&fam(&[9]), &fam(&[7]), 6), Err(Error::ConeViolation { a: 9, .. })));
    }

    #[test]
    fn witness_plans() {
        let w = build_witness(&[2, 3]).unwrap();
        assert_eq!((w.plan.p, w.plan.p_prime), (Some(13), Some(17)));
        assert_eq!(w.plan.a, vec![13, 17]);
        assert_eq!(w.plan.b, vec![10, 11, 14, 15]);
        assert_eq!(w.source.edge_count(), 30);

        let w = build_witness(&[]).unwrap();
        assert_eq!(w.source, MultiDigraph::digon(1));
        assert_eq!(w.target.edge_count(), 0);

        let w = build_witness(&[1]).unwrap();
        assert_eq!((w.plan.p, w.plan.p_prime, w.plan.a.clone(), w.plan.b.clone()), (Some(5), Some(7), vec![5, 7], vec![4, 6]));

        // T is reduced to its maximal elements
        assert_eq!(build_witness(&[2, 4, 1]).unwrap().plan, build_witness(&[4]).unwrap().plan);
        assert!(build_witness(&[0]).is_err());
    }

    #[test]
    fn witness_verification() {
        for (t, members) in [(&[2, 3][..], vec![1, 2, 3]), (&[1], vec![1]), (&[4], vec![1, 2, 4])] {
            let report = verify_witness(&build_witness(t).unwrap().plan).unwrap();
            assert!(report.passed, "{t:?}: {report:?}");
            assert_eq!(report.computed.members().unwrap(), members);
        }
        let report = verify_witness(&build_witness(&[]).unwrap().plan).unwrap();
        assert!(report.passed && report.computed.is_empty());
    }

    #[test]
    fn recognizes_digon_unions() {
        let g = disjoint_union(&[MultiDigraph::digon(3), MultiDigraph::edgeless(1), MultiDigraph::digon(5)]);
        assert_eq!(DigonFamily::recognize(&g), Some(fam(&[3, 5])));
        let flipped = MultiDigraph::digon(2).with_reversed_edge(0).unwrap().with_reversed_edge(1).unwrap();
        assert_eq!(DigonFamily::recognize(&flipped), Some(fam(&[2])));
        assert_eq!(DigonFamily::recognize(&MultiDigraph::dicycle(2)), None);
        assert_eq!(DigonFamily::recognize(&MultiDigraph::single_loop()), None);
        assert_eq!(DigonFamily::recognize(&MultiDigraph::edgeless(2)), None);
    }
}
