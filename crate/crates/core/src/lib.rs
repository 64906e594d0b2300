//! Flow-continuous edge mappings between finite multidigraphs.
//!
//! A map `f: E(G) -> E(H)` is *M-flow-continuous* (FF_M) when every M-flow on
//! `H` pulls back along `f` to an M-flow on `G`. This crate decides that
//! property exactly for every finitely generated abelian group `M`, computes
//! the divisor ideals `FF(f, G, H)` and `FF(G, H)`, and builds digon-family
//! witnesses realizing a prescribed divisor down-set.
//!
//! The integer primitives in [`algebra`] are generic over [`num_traits::PrimInt`];
//! the graph-level code fixes the scalar to the aliases below.

pub mod algebra;
pub mod constructions;
pub mod decide;
mod error;
pub mod flow;
pub mod graph;
pub mod sets;

/// Signed scalar used for tension/flow coefficients and discrepancy entries.
pub type Int = i64;
/// Unsigned scalar used for group orders, moduli and gcd certificates.
pub type Nat = u64;

pub use algebra::{Exponent, GroupSpec, Modulus};
pub use constructions::{DigonFamily, WitnessPlan};
pub use decide::{Decision, DiscrepancyMatrix, EdgeMap, FailureCertificate};
pub use error::{Error, Result};
pub use flow::GroupVector;
pub use graph::{Edge, MultiDigraph, SignedEdgeVector, SpanningStructure};
pub use sets::{FfSet, SearchOutcome};

/// Default cap on the number of edge maps an exhaustive search may visit.
pub const DEFAULT_MAP_BUDGET: u64 = 100_000_000;
/// Default cap on the number of group vectors a flow enumeration may produce.
pub const DEFAULT_FLOW_BUDGET: u64 = 10_000_000;
