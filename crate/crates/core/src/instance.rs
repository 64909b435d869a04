//! Validated input vectors and the coprimality conditions every other module
//! relies on.
//!
//! An [`Instance`] is always stored sorted ascending. `weak_ok` records
//! whether the overall gcd is 1 (a Frobenius number exists); `strong_ok`
//! records pairwise coprimality, which the Beck-style bounds require.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Greatest common divisor of a non-empty list of positive integers.
pub fn gcd_of(values: &[u64]) -> Result<u64> {
    let (&first, rest) = values
        .split_first()
        .ok_or_else(|| Error::Usage("gcd of an empty list".into()))?;
    if values.contains(&0) {
        return Err(Error::Usage("gcd_of expects positive values".into()));
    }
    Ok(rest.iter().fold(first, |g, &v| gcd(g, v)))
}

/// Coprimality verdicts for an entry vector.
///
/// `witness` holds 0-based positions `(i, j)`, `i < j`, into the sorted
/// entries with `gcd(a_i, a_j) > 1`; it is present exactly when `strong` is
/// false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConditionStatus {
    pub weak: bool,
    pub strong: bool,
    pub witness: Option<(usize, usize)>,
}

impl ConditionStatus {
    fn of_sorted(entries: &[u64]) -> Self {
        let weak = entries.iter().fold(0, |g, &v| gcd(g, v)) == 1;
        let mut witness = None;
        'scan: for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if gcd(entries[i], entries[j]) > 1 {
                    witness = Some((i, j));
                    break 'scan;
                }
            }
        }
        ConditionStatus {
            weak,
            strong: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    entries: Vec<u64>,
    status: ConditionStatus,
}

impl Instance {
    /// Sorts and checks `entries`.
    ///
    /// Fewer than two entries or a non-positive entry is an error. A gcd
    /// above 1 is not: it is reported through [`Instance::weak_ok`] and the
    /// operations that need a Frobenius number refuse the instance.
    pub fn validate(entries: &[i64]) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Dimension(entries.len()));
        }
        let mut sorted = Vec::with_capacity(entries.len());
        for (index, &value) in entries.iter().enumerate() {
            if value <= 0 {
                return Err(Error::NonPositiveEntry { index, value });
            }
            sorted.push(value as u64);
        }
        Self::from_unsigned(sorted)
    }

    pub fn from_unsigned(mut entries: Vec<u64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Dimension(entries.len()));
        }
        if let Some(index) = entries.iter().position(|&v| v == 0) {
            return Err(Error::NonPositiveEntry { index, value: 0 });
        }
        entries.sort_unstable();
        let status = ConditionStatus::of_sorted(&entries);
        Ok(Instance { entries, status })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn weak_ok(&self) -> bool {
        self.status.weak
    }

    pub fn strong_ok(&self) -> bool {
        self.status.strong
    }

    pub fn status(&self) -> ConditionStatus {
        self.status
    }

    pub fn smallest(&self) -> u64 {
        self.entries[0]
    }

    pub fn sum(&self) -> u128 {
        self.entries.iter().map(|&v| v as u128).sum()
    }

    /// The three smallest entries, when there are at least three.
    pub fn leading_triple(&self) -> Option<Triple> {
        match self.entries[..] {
            [a1, a2, a3, ..] => Some(Triple { a1, a2, a3 }),
            _ => None,
        }
    }

    pub(crate) fn require_weak(&self) -> Result<()> {
        if self.weak_ok() {
            Ok(())
        } else {
            Err(Error::NotPrimitive {
                gcd: self.entries.iter().fold(0, |g, &v| gcd(g, v)),
            })
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Smallest odd entry `o₁`. Every weak-valid instance has one.
pub fn smallest_odd(instance: &Instance) -> Result<u64> {
    instance
        .entries()
        .iter()
        .copied()
        .find(|v| v % 2 == 1)
        .ok_or_else(|| {
            Error::Invariant(format!(
                "{instance} has no odd entry; it cannot satisfy gcd = 1"
            ))
        })
}

/// A sorted triple `a1 <= a2 <= a3`, the part of an instance the Beck-style
/// bounds look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
}

impl Triple {
    pub fn sorted(x: u64, y: u64, z: u64) -> Self {
        let mut v = [x, y, z];
        v.sort_unstable();
        Triple {
            a1: v[0],
            a2: v[1],
            a3: v[2],
        }
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn is_pairwise_coprime(&self) -> bool {
        gcd(self.a1, self.a2) == 1 && gcd(self.a1, self.a3) == 1 && gcd(self.a2, self.a3) == 1
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.a1 < self.a2 && self.a2 < self.a3
    }

    pub fn sum(&self) -> u128 {
        self.a1 as u128 + self.a2 as u128 + self.a3 as u128
    }

    pub fn prod12(&self) -> u128 {
        self.a1 as u128 * self.a2 as u128
    }

    pub fn prod123(&self) -> u128 {
        self.prod12() * self.a3 as u128
    }

    pub fn to_instance(&self) -> Instance {
        Instance::from_unsigned(self.as_array().to_vec())
            .expect("a triple has three positive entries")
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a1, self.a2, self.a3)
    }
}
