//! Exact Frobenius numbers.
//!
//! The primary route builds the Apéry table of the instance with respect to
//! its smallest entry `m`: for every residue `r mod m` the smallest
//! representable value congruent to `r`. This is a single-source shortest
//! path over `m` residue nodes where entry `a` adds an edge `r -> (r + a) mod m`
//! of weight `a`. The Frobenius number is then `max(table) - m`.
//!
//! [`frobenius_oracle`] is an unrelated dynamic-programming sieve used to
//! cross-check the table.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::{gcd, Error, Instance, Result};

/// Largest smallest-entry the Apéry table is built for.
pub const MAX_APERY_MODULUS: u64 = 10_000_000;

/// Largest sieve the oracle allocates.
pub const MAX_SIEVE_LIMIT: i64 = 1 << 30;

/// Node budget for [`count_representations`].
pub const REPRESENTATION_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyTable {
    modulus: u64,
    minimal: Vec<u64>,
}

impl AperyTable {
    pub fn build(instance: &Instance) -> Result<Self> {
        instance.require_weak()?;
        let m = instance.smallest();
        if m > MAX_APERY_MODULUS {
            return Err(Error::ResourceExhausted {
                what: "smallest entry (Apéry modulus)",
                limit: MAX_APERY_MODULUS,
            });
        }
        let size = m as usize;

        // Entries that are multiples of m never leave a residue class.
        let mut steps: Vec<u64> = instance
            .entries()
            .iter()
            .copied()
            .filter(|a| a % m != 0)
            .collect();
        steps.dedup();

        let mut minimal = vec![u64::MAX; size];
        minimal[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((dist, r))) = heap.pop() {
            if dist > minimal[r] {
                continue;
            }
            for &a in &steps {
                let next = ((r as u64 + a % m) % m) as usize;
                let cand = dist.checked_add(a).ok_or(Error::Overflow("Apéry table"))?;
                if cand < minimal[next] {
                    minimal[next] = cand;
                    heap.push(Reverse((cand, next)));
                }
            }
        }

        if minimal.contains(&u64::MAX) {
            return Err(Error::Invariant(format!(
                "unreachable residue class for {instance} despite gcd = 1"
            )));
        }
        Ok(AperyTable {
            modulus: m,
            minimal,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `minimal()[r]` is the least representable value congruent to `r`.
    pub fn minimal(&self) -> &[u64] {
        &self.minimal
    }

    pub fn frobenius(&self) -> i64 {
        let max = *self.minimal.iter().max().expect("modulus >= 1");
        max as i64 - self.modulus as i64
    }

    pub fn is_representable(&self, b: i64) -> bool {
        if b < 0 {
            return false;
        }
        let b = b as u64;
        self.minimal[(b % self.modulus) as usize] <= b
    }
}

/// Frobenius number via the Apéry table; `-1` when the smallest entry is 1.
pub fn frobenius_exact(instance: &Instance) -> Result<i64> {
    instance.require_weak()?;
    if instance.smallest() == 1 {
        return Ok(-1);
    }
    Ok(AperyTable::build(instance)?.frobenius())
}

/// Largest non-representable `b <= limit` found by a reachability sieve, or
/// `-1` when everything up to `limit` is representable.
///
/// The result equals the Frobenius number only when `limit` is at least an
/// upper bound for it. No limit is inferred here.
pub fn frobenius_oracle(instance: &Instance, limit: i64) -> Result<i64> {
    if limit < 0 {
        return Err(Error::Usage(format!(
            "sieve limit must be >= 0, got {limit}"
        )));
    }
    instance.require_weak()?;
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::ResourceExhausted {
            what: "sieve limit",
            limit: MAX_SIEVE_LIMIT as u64,
        });
    }
    let len = limit as usize + 1;
    let mut reachable = vec![false; len];
    reachable[0] = true;
    let mut last_gap = -1i64;
    for b in 1..len {
        reachable[b] = instance
            .entries()
            .iter()
            .any(|&a| (a as usize) <= b && reachable[b - a as usize]);
        if !reachable[b] {
            last_gap = b as i64;
        }
    }
    Ok(last_gap)
}

/// Two-entry closed form `ab - a - b`.
pub fn sylvester_pair(a: u64, b: u64) -> Result<i64> {
    if a == 0 || b == 0 {
        return Err(Error::Usage(
            "sylvester_pair expects positive arguments".into(),
        ));
    }
    let g = gcd(a, b);
    if g != 1 {
        return Err(Error::NotCoprime {
            a: a as i64,
            b: b as i64,
            gcd: g,
        });
    }
    let value = a as i128 * b as i128 - a as i128 - b as i128;
    i64::try_from(value).map_err(|_| Error::Overflow("sylvester_pair"))
}

/// Largest integer with no strictly positive representation: `F + Σ aᵢ`.
pub fn frobenius_star(instance: &Instance) -> Result<i64> {
    let f = frobenius_exact(instance)? as i128;
    i64::try_from(f + instance.sum() as i128).map_err(|_| Error::Overflow("frobenius_star"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCount {
    pub target: i64,
    /// Tuples with every coefficient >= 1.
    pub positive_count: u64,
    /// Tuples with every coefficient >= 0.
    pub nonnegative_count: u64,
}

/// Counts representations of `b` by enumerating coefficient tuples.
///
/// Each entry is a separate variable, so repeated entries count as distinct
/// coordinates. Fails with a resource error past
/// [`REPRESENTATION_NODE_LIMIT`] enumeration nodes.
pub fn count_representations(instance: &Instance, b: i64) -> Result<RepCount> {
    count_representations_with_limit(instance, b, REPRESENTATION_NODE_LIMIT)
}

pub fn count_representations_with_limit(
    instance: &Instance,
    b: i64,
    node_limit: u64,
) -> Result<RepCount> {
    instance.require_weak()?;
    if b < 0 {
        return Ok(RepCount {
            target: b,
            positive_count: 0,
            nonnegative_count: 0,
        });
    }
    // Largest entries first keeps the outer loops short; the smallest entry
    // is solved by divisibility.
    let desc: Vec<u64> = instance.entries().iter().rev().copied().collect();
    let mut nodes = 0u64;
    let mut enumerate = |min_coeff: u64| -> Result<u64> {
        let mut count = 0u64;
        enumerate_tuples(
            &desc, b as u64, min_coeff, &mut nodes, node_limit, &mut count,
        )?;
        Ok(count)
    };
    let nonnegative_count = enumerate(0)?;
    let positive_count = enumerate(1)?;
    Ok(RepCount {
        target: b,
        positive_count,
        nonnegative_count,
    })
}

fn enumerate_tuples(
    entries: &[u64],
    remaining: u64,
    min_coeff: u64,
    nodes: &mut u64,
    node_limit: u64,
    count: &mut u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > node_limit {
        return Err(Error::ResourceExhausted {
            what: "representation enumeration nodes",
            limit: node_limit,
        });
    }
    let (&a, rest) = entries.split_first().expect("non-empty entries");
    if rest.is_empty() {
        if remaining.is_multiple_of(a) && remaining / a >= min_coeff {
            *count += 1;
        }
        return Ok(());
    }
    let mut coeff = min_coeff;
    while let Some(used) = coeff.checked_mul(a).filter(|&u| u <= remaining) {
        enumerate_tuples(rest, remaining - used, min_coeff, nodes, node_limit, count)?;
        coeff += 1;
    }
    Ok(())
}

/// Nonnegative representation counts for every `b` in `0..=upto`, by the
/// coin-change recurrence over the entries.
pub fn representation_table(instance: &Instance, upto: u64) -> Result<Vec<u64>> {
    if upto > MAX_SIEVE_LIMIT as u64 {
        return Err(Error::ResourceExhausted {
            what: "representation table size",
            limit: MAX_SIEVE_LIMIT as u64,
        });
    }
    let len = upto as usize + 1;
    let mut ways = vec![0u64; len];
    ways[0] = 1;
    for &a in instance.entries() {
        let a = a as usize;
        for b in a..len {
            ways[b] = ways[b]
                .checked_add(ways[b - a])
                .ok_or(Error::Overflow("representation table"))?;
        }
    }
    Ok(ways)
}

/// Strictly positive representation counts (`p′`) for `0..=upto`, using
/// `p′(b) = p(b - Σ aᵢ)`.
pub fn positive_representation_table(instance: &Instance, upto: u64) -> Result<Vec<u64>> {
    let ways = representation_table(instance, upto)?;
    let shift = instance.sum();
    Ok((0..=upto)
        .map(|b| {
            (b as u128)
                .checked_sub(shift)
                .map_or(0, |rest| ways[rest as usize])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(v: &[i64]) -> Instance {
        Instance::validate(v).unwrap()
    }

    /// Strictly-positive reachability sieve, independent of the F + Σ identity.
    fn star_oracle(a: &Instance, limit: usize) -> i64 {
        // After entry i, layer[b] says b is a sum using each of the first i
        // entries at least once.
        let mut layer = vec![false; limit + 1];
        layer[0] = true;
        for &x in a.entries() {
            let x = x as usize;
            let mut next = vec![false; limit + 1];
            for b in x..=limit {
                next[b] = layer[b - x] || next[b - x];
            }
            layer = next;
        }
        (0..=limit)
            .rev()
            .find(|&b| !layer[b])
            .map_or(-1, |b| b as i64)
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_exact(&inst(&[3, 6, 19])).unwrap(), 35);
        assert_eq!(frobenius_exact(&inst(&[1, 7, 9])).unwrap(), -1);
        assert_eq!(frobenius_exact(&inst(&[6, 10, 15])).unwrap(), 29);
        assert_eq!(frobenius_exact(&inst(&[2, 4, 6, 9])).unwrap(), 7);
    }

    #[test]
    fn frobenius_requires_primitive_vector() {
        assert!(matches!(
            frobenius_exact(&inst(&[4, 6, 10])),
            Err(Error::NotPrimitive { gcd: 2 })
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(frobenius_oracle(&inst(&[2, 3]), 10).unwrap(), 1);
        assert_eq!(frobenius_oracle(&inst(&[3, 6, 19]), 100).unwrap(), 35);
        assert_eq!(frobenius_oracle(&inst(&[1, 2]), 50).unwrap(), -1);
        assert!(matches!(
            frobenius_oracle(&inst(&[2, 3]), -1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn oracle_of_6_10_15() {
        // (a1 - 1)(a2 - 1) bounds the search for this instance.
        assert_eq!(frobenius_oracle(&inst(&[6, 10, 15]), 45).unwrap(), 29);
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_pair(2, 3).unwrap(), 1);
        assert_eq!(sylvester_pair(1, 17).unwrap(), -1);
        assert_eq!(sylvester_pair(3, 5).unwrap(), 7);
        assert_eq!(frobenius_oracle(&inst(&[3, 5]), 20).unwrap(), 7);
        assert!(matches!(
            sylvester_pair(4, 6),
            Err(Error::NotCoprime { gcd: 2, .. })
        ));
    }

    #[test]
    fn star_examples() {
        assert_eq!(frobenius_star(&inst(&[2, 3])).unwrap(), 6);
        assert_eq!(star_oracle(&inst(&[2, 3]), 40), 6);
        assert_eq!(frobenius_star(&inst(&[1, 2])).unwrap(), 2);
        assert_eq!(star_oracle(&inst(&[1, 2]), 40), 2);
        assert_eq!(frobenius_star(&inst(&[3, 6, 19])).unwrap(), 63);
        assert_eq!(star_oracle(&inst(&[3, 6, 19]), 200), 63);
    }

    #[test]
    fn count_examples() {
        let c = count_representations(&inst(&[1, 2]), 3).unwrap();
        assert_eq!(c.positive_count, 1);
        let c = count_representations(&inst(&[2, 3]), 1).unwrap();
        assert_eq!(c.positive_count, 0);
        let c = count_representations(&inst(&[2, 3]), 12).unwrap();
        assert_eq!(c.nonnegative_count, 3);
        let c = count_representations(&inst(&[2, 3]), -4).unwrap();
        assert_eq!((c.positive_count, c.nonnegative_count), (0, 0));
    }

    #[test]
    fn count_hits_node_budget() {
        let r = count_representations_with_limit(&inst(&[1, 1, 1, 1]), 500, 1000);
        assert!(matches!(r, Err(Error::ResourceExhausted { .. })));
    }

    #[test]
    fn table_agrees_with_enumeration() {
        for v in [[2i64, 3, 5], [1, 1, 1], [3, 7, 11], [4, 9, 13]] {
            let a = inst(&v);
            let pos = positive_representation_table(&a, 150).unwrap();
            let all = representation_table(&a, 150).unwrap();
            for b in 0..=150u64 {
                let c = count_representations(&a, b as i64).unwrap();
                assert_eq!(c.positive_count, pos[b as usize], "{a} b={b}");
                assert_eq!(c.nonnegative_count, all[b as usize], "{a} b={b}");
            }
        }
    }

    #[test]
    fn apery_table_invariants() {
        let a = inst(&[7, 12, 20, 31]);
        let t = AperyTable::build(&a).unwrap();
        assert_eq!(t.minimal()[0], 0);
        let f = frobenius_oracle(&a, 400).unwrap();
        for (r, &v) in t.minimal().iter().enumerate() {
            assert_eq!(v % 7, r as u64);
            assert!(v as i64 <= f + 7);
        }
        assert_eq!(t.frobenius(), f);
    }

    fn weak_instance() -> impl Strategy<Value = Instance> {
        prop::collection::vec(1i64..=60, 2..=4)
            .prop_map(|v| Instance::validate(&v).unwrap())
            .prop_filter("gcd = 1", |a| a.weak_ok())
    }

    proptest! {
        #[test]
        fn exact_matches_oracle(a in weak_instance()) {
            // Every residue is reached in at most a1 - 1 steps of weight at
            // most an, so F < a1 * an.
            let limit = (a.entries()[0] * a.entries()[a.n() - 1]) as i64;
            prop_assert_eq!(frobenius_exact(&a).unwrap(), frobenius_oracle(&a, limit).unwrap());
        }

        #[test]
        fn frobenius_is_the_last_gap(a in weak_instance()) {
            let f = frobenius_exact(&a).unwrap();
            let t = AperyTable::build(&a).unwrap();
            prop_assert!(!t.is_representable(f));
            for b in f + 1..=f + a.smallest() as i64 {
                prop_assert!(t.is_representable(b));
            }
        }

        #[test]
        fn odd_gap_is_a_lower_bound(a in weak_instance()) {
            let o1 = crate::smallest_odd(&a).unwrap() as i64;
            prop_assert!(frobenius_exact(&a).unwrap() >= o1 - 2);
        }

        #[test]
        fn p_prime_vanishes_at_star(v in prop::collection::vec(1i64..=12, 2..=3)) {
            let a = Instance::validate(&v).unwrap();
            prop_assume!(a.weak_ok());
            let star = frobenius_star(&a).unwrap();
            prop_assert_eq!(count_representations(&a, star).unwrap().positive_count, 0);
            for b in star + 1..=star + a.smallest() as i64 {
                prop_assert!(count_representations(&a, b).unwrap().positive_count > 0);
            }
        }

        #[test]
        fn positive_never_exceeds_nonnegative(v in prop::collection::vec(1i64..=10, 2..=4), b in -5i64..80) {
            let a = Instance::validate(&v).unwrap();
            prop_assume!(a.weak_ok());
            let c = count_representations(&a, b).unwrap();
            prop_assert!(c.positive_count <= c.nonnegative_count);
        }
    }

    #[test]
    fn sylvester_consistency_sweep() {
        for a in 1..200u64 {
            for b in a + 1..=200 {
                if gcd(a, b) == 1 {
                    let i = Instance::from_unsigned(vec![a, b]).unwrap();
                    assert_eq!(frobenius_exact(&i).unwrap(), sylvester_pair(a, b).unwrap());
                }
            }
        }
    }
}
