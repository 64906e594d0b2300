//! Integer and group-theoretic primitives.
//!
//! Overflow policy: the generic helpers use checked arithmetic and report
//! overflow instead of wrapping. Group orders are limited to `i64::MAX` so
//! every residue fits the signed [`Int`] coordinate type; sums of residues are
//! accumulated in `i128` by callers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{PrimInt, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::{Error, Int, Nat, Result};

/// Gcd of the absolute values; `0` for an empty or all-zero input.
///
/// For signed `T` the values must be greater than `T::min_value()`.
pub fn gcd_all<T, I>(values: I) -> T
where
    T: PrimInt + Integer,
    I: IntoIterator<Item = T>,
{
    values.into_iter().fold(T::zero(), |acc, v| acc.gcd(&v))
}

/// Least common multiple, `None` on overflow. `lcm(0, x) = 0`.
pub fn checked_lcm<T: PrimInt + Integer>(a: T, b: T) -> Option<T> {
    if a.is_zero() || b.is_zero() {
        return Some(T::zero());
    }
    let g = a.gcd(&b);
    (a / g).checked_mul(&b).map(|l| if l < T::zero() { T::zero() - l } else { l })
}

/// All positive divisors of `n`, ascending.
pub fn divisors<T: PrimInt + Integer>(n: T) -> Result<Vec<T>> {
    if n <= T::zero() {
        return Err(Error::InvalidArgument("divisors of a non-positive integer".into()));
    }
    let mut factors: Vec<(T, u32)> = Vec::new();
    let mut rest = n;
    let two = T::one() + T::one();
    let mut d = two;
    while d <= rest / d {
        if rest % d == T::zero() {
            let mut mult = 0;
            while rest % d == T::zero() {
                rest = rest / d;
                mult += 1;
            }
            factors.push((d, mult));
        }
        d = if d == two { d + T::one() } else { d + two };
    }
    if rest > T::one() {
        factors.push((rest, 1));
    }
    let mut out = vec![T::one()];
    for (p, mult) in factors {
        let len = out.len();
        let mut power = T::one();
        for _ in 0..mult {
            power = power * p;
            for i in 0..len {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Whether `target` is a nonnegative integer combination of `generators`.
///
/// Runs a shortest-path DP over residues modulo the smallest generator, so
/// memory is `O(min generator)` and the cost does not grow with `target`.
/// Zero generators contribute nothing and are skipped.
///
/// # Panics
/// If a generator or the target is negative.
pub fn cone_member<T: PrimInt>(target: T, generators: &[T]) -> bool {
    assert!(target >= T::zero(), "cone target must be nonnegative");
    assert!(generators.iter().all(|g| *g >= T::zero()), "cone generators must be nonnegative");
    let target = target.to_u128().expect("nonnegative fits u128");
    if target == 0 {
        return true;
    }
    let mut gens: Vec<u128> = generators
        .iter()
        .filter_map(|g| g.to_u128())
        .filter(|g| *g > 0)
        .collect();
    gens.sort_unstable();
    gens.dedup();
    let Some(&m) = gens.first() else {
        return false;
    };
    if target < m {
        return false;
    }
    let m_idx = m.to_usize().expect("smallest generator must fit in memory");
    // dist[r] = least representable value congruent to r mod m
    let mut dist = vec![u128::MAX; m_idx];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u128, 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &g in &gens[1..] {
            let nd = d + g;
            let nr = (nd % m) as usize;
            if nd < dist[nr] {
                dist[nr] = nd;
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    dist[(target % m) as usize] <= target
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_above(x: u64) -> Result<u64> {
    let mut candidate = x.checked_add(1).ok_or(Error::Overflow("next_prime_above"))?;
    while !is_prime(candidate) {
        candidate = candidate.checked_add(1).ok_or(Error::Overflow("next_prime_above"))?;
    }
    Ok(candidate)
}

/// The exponent `n(M)`: largest element order, or infinite with a free factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    Infinite,
    Finite(Nat),
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinite => write!(f, "infinite"),
            Exponent::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Coefficient ring of an FF question: the integers or `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulus {
    Integers,
    Cyclic(Nat),
}

impl Modulus {
    /// Whether `value` is zero in this ring.
    pub fn annihilates(self, value: Int) -> bool {
        match self {
            Modulus::Integers => value == 0,
            Modulus::Cyclic(n) => value.unsigned_abs().is_multiple_of(n),
        }
    }

    /// Whether FF over this ring holds for a map with discrepancy gcd `g`.
    pub fn divides(self, g: Nat) -> bool {
        match self {
            Modulus::Integers => g == 0,
            Modulus::Cyclic(n) => g.is_multiple_of(n),
        }
    }
}

impl From<Exponent> for Modulus {
    fn from(e: Exponent) -> Self {
        match e {
            Exponent::Infinite => Modulus::Integers,
            Exponent::Finite(n) => Modulus::Cyclic(n),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Integers => write!(f, "Z"),
            Modulus::Cyclic(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    /// `"Z"` or a positive integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(Modulus::Integers);
        }
        match s.parse::<Nat>() {
            Ok(n) if n >= 1 => Ok(Modulus::Cyclic(n)),
            _ => Err(Error::InvalidArgument(format!("expected `Z` or a positive integer, got `{s}`"))),
        }
    }
}

/// A finitely generated abelian group `Z^free_rank x Z_{n_1} x ... x Z_{n_k}`.
///
/// Orders need not be prime powers and may repeat. An element is a tuple of
/// [`Int`] coordinates: the free coordinates first, then one residue per
/// cyclic factor in the order given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct GroupSpec {
    free_rank: usize,
    cyclic_orders: Vec<Nat>,
    exponent: Exponent,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    free_rank: usize,
    cyclic_orders: Vec<Nat>,
}

impl TryFrom<RawGroup> for GroupSpec {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        GroupSpec::new(raw.free_rank, raw.cyclic_orders)
    }
}

impl From<GroupSpec> for RawGroup {
    fn from(g: GroupSpec) -> Self {
        RawGroup { free_rank: g.free_rank, cyclic_orders: g.cyclic_orders }
    }
}

impl GroupSpec {
    pub fn new(free_rank: usize, cyclic_orders: Vec<Nat>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidGroup {
            text: format!("free rank {free_rank}, orders {cyclic_orders:?}"),
            reason,
        };
        let mut lcm: Nat = 1;
        for &n in &cyclic_orders {
            if n == 0 {
                return Err(invalid("cyclic order 0".into()));
            }
            if n > Int::MAX as Nat {
                return Err(invalid(format!("cyclic order {n} exceeds {}", Int::MAX)));
            }
            lcm = checked_lcm(lcm, n).ok_or(Error::Overflow("group exponent"))?;
        }
        let exponent = if free_rank > 0 { Exponent::Infinite } else { Exponent::Finite(lcm) };
        Ok(GroupSpec { free_rank, cyclic_orders, exponent })
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, cyclic_orders: Vec::new(), exponent: Exponent::Finite(1) }
    }

    pub fn integers() -> Self {
        GroupSpec { free_rank: 1, cyclic_orders: Vec::new(), exponent: Exponent::Infinite }
    }

    pub fn cyclic(n: Nat) -> Result<Self> {
        GroupSpec::new(0, vec![n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn cyclic_orders(&self) -> &[Nat] {
        &self.cyclic_orders
    }

    /// `n(M)`: infinite if there is a free factor, else the lcm of the orders.
    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    /// Direct product; cyclic factors are concatenated.
    pub fn product(&self, other: &GroupSpec) -> Result<GroupSpec> {
        let mut orders = self.cyclic_orders.clone();
        orders.extend_from_slice(&other.cyclic_orders);
        GroupSpec::new(self.free_rank + other.free_rank, orders)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `|M|`, or `None` for an infinite group. Saturates at `u128::MAX`.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        Some(self.cyclic_orders.iter().fold(1u128, |acc, &n| acc.saturating_mul(n as u128)))
    }

    /// Number of coordinates of an element.
    pub fn width(&self) -> usize {
        self.free_rank + self.cyclic_orders.len()
    }

    /// Modulus of coordinate `i`; `None` for a free coordinate.
    pub fn coordinate_order(&self, i: usize) -> Option<Nat> {
        i.checked_sub(self.free_rank).map(|j| self.cyclic_orders[j])
    }

    /// Canonical representative of `value` in coordinate `i`.
    pub fn reduce(&self, i: usize, value: i128) -> Int {
        match self.coordinate_order(i) {
            None => Int::try_from(value).expect("free coordinate overflow"),
            Some(n) => value.rem_euclid(n as i128) as Int,
        }
    }

    /// Whether `element` has the right width and in-range residues.
    pub fn is_valid_element(&self, element: &[Int]) -> bool {
        element.len() == self.width()
            && element.iter().enumerate().all(|(i, &x)| match self.coordinate_order(i) {
                None => true,
                Some(n) => x >= 0 && (x as Nat) < n,
            })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = vec!["Z".to_string(); self.free_rank];
        parts.extend(self.cyclic_orders.iter().map(|n| format!("Z{n}")));
        if parts.is_empty() {
            parts.push("Z1".into());
        }
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `Z`, `Z<k>`, a bare `<k>`, or a product of these joined by `x`.
    fn from_str(text: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidGroup { text: text.to_string(), reason: reason.to_string() };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(invalid("empty group"));
        }
        let mut free_rank = 0;
        let mut orders = Vec::new();
        for factor in trimmed.split('x') {
            let factor = factor.trim();
            let digits = factor.strip_prefix('Z').unwrap_or(factor);
            if factor == "Z" {
                free_rank += 1;
                continue;
            }
            if digits.is_empty() {
                return Err(invalid("empty factor"));
            }
            let n: Nat = digits.parse().map_err(|_| invalid("non-numeric order"))?;
            if n == 0 {
                return Err(invalid("order 0"));
            }
            orders.push(n);
        }
        GroupSpec::new(free_rank, orders).map_err(|e| match e {
            Error::InvalidGroup { reason, .. } => Error::InvalidGroup { text: text.to_string(), reason },
            other => other,
        })
    }
}

/// Parses a group; same as `text.parse::<GroupSpec>()`.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reachability over `0..=target`; the straightforward table the residue DP replaces.
    fn cone_table(target: usize, generators: &[usize]) -> bool {
        let mut reach = vec![false; target + 1];
        reach[0] = true;
        for v in 1..=target {
            reach[v] = generators.iter().any(|&g| g > 0 && g <= v && reach[v - g]);
        }
        reach[target]
    }

    #[test]
    fn parses_products_and_shorthand() {
        let g: GroupSpec = "Z2xZ3".parse().unwrap();
        assert_eq!((g.free_rank(), g.cyclic_orders()), (0, &[2, 3][..]));
        let z: GroupSpec = "Z".parse().unwrap();
        assert_eq!((z.free_rank(), z.cyclic_orders()), (1, &[][..]));
        let bare: GroupSpec = "5".parse().unwrap();
        assert_eq!(bare.cyclic_orders(), &[5]);
        let mixed: GroupSpec = "ZxZ2".parse().unwrap();
        assert_eq!((mixed.free_rank(), mixed.exponent()), (1, Exponent::Infinite));
    }

    #[test]
    fn rejects_bad_groups() {
        for bad in ["", "Z0", "Zx", "Zq", "Z2x", "0", "Z-3"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn exponent_examples() {
        assert_eq!("Z2xZ3".parse::<GroupSpec>().unwrap().exponent(), Exponent::Finite(6));
        assert_eq!(GroupSpec::integers().exponent(), Exponent::Infinite);
        assert_eq!(GroupSpec::trivial().exponent(), Exponent::Finite(1));
        assert_eq!("Z1xZ1".parse::<GroupSpec>().unwrap().exponent(), Exponent::Finite(1));
        assert_eq!("Z4xZ6".parse::<GroupSpec>().unwrap().exponent(), Exponent::Finite(12));
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = (1u64 << 62) - 57; // prime
        let other = (1u64 << 61) - 1; // prime
        assert_eq!(GroupSpec::new(0, vec![big, other]), Err(Error::Overflow("group exponent")));
        assert!(GroupSpec::new(0, vec![u64::MAX]).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["Z", "Z2xZ3", "ZxZxZ4"] {
            let g: GroupSpec = text.parse().unwrap();
            assert_eq!(g.to_string(), text);
            assert_eq!(g.to_string().parse::<GroupSpec>().unwrap(), g);
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(6u64).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(divisors(1u64).unwrap(), vec![1]);
        assert_eq!(divisors(9i32).unwrap(), vec![1, 3, 9]);
        assert_eq!(divisors(360u32).unwrap().len(), 24);
        assert!(divisors(0u64).is_err());
        assert_eq!(divisors(1u64 << 62).unwrap().len(), 63);
    }

    #[test]
    fn cone_examples() {
        assert!(cone_member(9u64, &[7, 2]));
        assert!(!cone_member(9u64, &[7, 6]));
        assert!(cone_member(0u64, &[5]));
        assert!(cone_member(0u64, &[]));
        assert!(!cone_member(3u64, &[]));
        assert!(cone_member(1i32, &[1]));
        // huge target against small generators; the table DP could not do this
        let t = (1u64 << 62) + 1;
        assert!(cone_member(t, &[4, 6, 9]));
        assert!(!cone_member(t, &[4, 6]));
    }

    #[test]
    fn prime_examples() {
        assert_eq!(next_prime_above(12).unwrap(), 13);
        assert_eq!(next_prime_above(13).unwrap(), 17);
        assert_eq!(next_prime_above(1).unwrap(), 2);
        assert_eq!(next_prime_above(1 << 62).unwrap(), (1 << 62) + 135);
        assert!(next_prime_above(u64::MAX - 10).is_err());
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_all([6i64, -9]), 3);
        assert_eq!(gcd_all(Vec::<i64>::new()), 0);
        assert_eq!(gcd_all([0u64, 0]), 0);
        assert_eq!(gcd_all([0i64, -4, 10]), 2);
    }

    #[test]
    fn modulus_parsing() {
        assert_eq!("Z".parse::<Modulus>().unwrap(), Modulus::Integers);
        assert_eq!("6".parse::<Modulus>().unwrap(), Modulus::Cyclic(6));
        assert!("0".parse::<Modulus>().is_err());
        assert!(Modulus::Cyclic(3).annihilates(-9));
        assert!(!Modulus::Integers.annihilates(3));
        assert!(Modulus::Integers.divides(0));
        assert!(Modulus::Cyclic(7).divides(0));
    }

    proptest! {
        #[test]
        fn cone_dp_matches_table(target in 0usize..200, gens in prop::collection::vec(1usize..25, 0..4)) {
            prop_assert_eq!(cone_member(target, &gens), cone_table(target, &gens));
        }

        #[test]
        fn cone_closed_under_addition(a in 0u32..150, b in 0u32..150, gens in prop::collection::vec(1u32..20, 1..4)) {
            if cone_member(a, &gens) && cone_member(b, &gens) {
                prop_assert!(cone_member(a + b, &gens));
            }
        }

        #[test]
        fn cone_with_one_is_everything(t in 0u64..10_000, mut gens in prop::collection::vec(1u64..50, 0..4)) {
            gens.push(1);
            prop_assert!(cone_member(t, &gens));
        }

        #[test]
        fn exponent_of_product_is_lcm(a in prop::collection::vec(1u64..40, 0..4), b in prop::collection::vec(1u64..40, 0..4)) {
            let m1 = GroupSpec::new(0, a).unwrap();
            let m2 = GroupSpec::new(0, b).unwrap();
            let (Exponent::Finite(e1), Exponent::Finite(e2)) = (m1.exponent(), m2.exponent()) else { unreachable!() };
            prop_assert_eq!(m1.product(&m2).unwrap().exponent(), Exponent::Finite(checked_lcm(e1, e2).unwrap()));
        }

        #[test]
        fn divisors_form_an_ideal(n in 1u64..5000) {
            let ds = divisors(n).unwrap();
            prop_assert_eq!(ds.first(), Some(&1));
            prop_assert_eq!(ds.last(), Some(&n));
            for &d in &ds {
                prop_assert_eq!(n % d, 0);
                for e in divisors(d).unwrap() {
                    prop_assert!(ds.contains(&e));
                }
            }
            prop_assert_eq!(ds.len() as u64, (1..=n).filter(|d| n % d == 0).count() as u64);
        }

        #[test]
        fn miller_rabin_matches_trial_division(n in 0u64..20_000) {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            prop_assert_eq!(is_prime(n), trial);
        }
    }
}
