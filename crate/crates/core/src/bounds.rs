//! Upper and lower bounds on the Frobenius number.
//!
//! Every bound is returned as a [`BoundResult`] carrying its raw value and
//! an applicability verdict. A bound evaluated outside its hypotheses is
//! still reported (with `applicable = false`) so that counterexamples such
//! as `(3, 6, 19)` can be reproduced rather than hidden behind an error.
//!
//! The two Beck-style bounds only look at the three smallest entries:
//!
//! - original: `½(√(a₁a₂a₃(a₁+a₂+a₃)) − a₁ − a₂ − a₃)`
//! - corrected: `½(√(⅓(a₁+a₂+a₃)(a₁+a₂+a₃+2a₁a₂a₃) + (8/3)(a₁a₂+a₂a₃+a₃a₁)) − a₁ − a₂ − a₃)`
//!
//! Both radicands are formed in exact 128-bit integers ([`BeckRadicands`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{gcd, smallest_odd, Error, Instance, Result, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    ErdosGraham,
    Selmer,
    Vitek,
    BeckOriginal,
    BeckCorrected,
    FukshanskyRobins,
    PairwiseSylvester,
    OddGapLower,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::BeckCorrected,
        BoundKind::BeckOriginal,
        BoundKind::ErdosGraham,
        BoundKind::Selmer,
        BoundKind::Vitek,
        BoundKind::FukshanskyRobins,
        BoundKind::PairwiseSylvester,
        BoundKind::OddGapLower,
    ];

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            BoundKind::BeckCorrected => "ub1",
            BoundKind::BeckOriginal => "ub2",
            BoundKind::ErdosGraham => "eg",
            BoundKind::Selmer => "selmer",
            BoundKind::Vitek => "vitek",
            BoundKind::FukshanskyRobins => "fr",
            BoundKind::PairwiseSylvester => "pairwise",
            BoundKind::OddGapLower => "lower",
        }
    }

    pub fn is_upper(self) -> bool {
        self != BoundKind::OddGapLower
    }

    /// Whether the bound assumes pairwise coprime entries.
    pub fn needs_strong(self) -> bool {
        matches!(
            self,
            BoundKind::BeckOriginal | BoundKind::BeckCorrected | BoundKind::PairwiseSylvester
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.short_name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown bound kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub kind: BoundKind,
    /// `None` only when the formula cannot be evaluated at all (too few
    /// entries, or no odd entry for the parity bound).
    pub value: Option<f64>,
    pub applicable: bool,
    /// Which hypothesis fails; set exactly when `applicable` is false.
    pub reason: Option<String>,
    /// Hypotheses of the original source that are not checked here.
    pub caveat: Option<&'static str>,
}

impl BoundResult {
    fn new(kind: BoundKind, value: Option<f64>, failure: Option<String>) -> Self {
        BoundResult {
            kind,
            value,
            applicable: failure.is_none(),
            reason: failure,
            caveat: None,
        }
    }

    /// True when the bound applies and `f` violates it.
    pub fn is_violated_by(&self, f: i64) -> bool {
        match (self.applicable, self.value) {
            (true, Some(v)) if self.kind.is_upper() => (f as f64) > v,
            (true, Some(v)) => (f as f64) < v,
            _ => false,
        }
    }
}

/// Integer ingredients of both Beck-style radicands for a triple.
///
/// With `S = a₁+a₂+a₃`, `P = a₁a₂a₃` and `Q = a₁a₂+a₂a₃+a₃a₁`:
///
/// - original radicand `R₂ = P·S`
/// - corrected radicand `R₁ = (S(S + 2P) + 8Q) / 3`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeckRadicands {
    pub sum: u128,
    pub product: u128,
    pub pair_sum: u128,
}

impl BeckRadicands {
    pub fn of(t: &Triple) -> Result<Self> {
        let (a, b, c) = (t.a1 as u128, t.a2 as u128, t.a3 as u128);
        let overflow = || Error::Overflow("Beck radicand");
        let product = a
            .checked_mul(b)
            .and_then(|x| x.checked_mul(c))
            .ok_or_else(overflow)?;
        let pair_sum = a * b + b * c + c * a;
        let r = BeckRadicands {
            sum: a + b + c,
            product,
            pair_sum,
        };
        r.corrected_times_three().ok_or_else(overflow)?;
        r.original().ok_or_else(overflow)?;
        Ok(r)
    }

    pub fn original(&self) -> Option<u128> {
        self.product.checked_mul(self.sum)
    }

    pub fn corrected_times_three(&self) -> Option<u128> {
        let s = self.sum;
        s.checked_mul(s.checked_add(self.product.checked_mul(2)?)?)?
            .checked_add(self.pair_sum.checked_mul(8)?)
    }

    /// `3(R₂ − R₁) = P·S − S² − 8Q`, exact.
    pub fn difference_times_three(&self) -> i128 {
        let ps = self.original().expect("checked in of()") as i128;
        ps - (self.sum * self.sum) as i128 - 8 * self.pair_sum as i128
    }
}

/// Corrected Beck bound (UB₁) of a triple, with no applicability check.
pub fn ub1_value(t: &Triple) -> Result<f64> {
    let r = BeckRadicands::of(t)?;
    let radicand = r.corrected_times_three().expect("checked") as f64 / 3.0;
    Ok(0.5 * (radicand.sqrt() - r.sum as f64))
}

/// Original Beck bound (UB₂) of a triple, with no applicability check.
pub fn ub2_value(t: &Triple) -> Result<f64> {
    let r = BeckRadicands::of(t)?;
    Ok(0.5 * ((r.original().expect("checked") as f64).sqrt() - r.sum as f64))
}

/// `UB₂ − UB₁` without cancellation: `½(R₂ − R₁)/(√R₂ + √R₁)`. Exactly zero
/// when the radicands tie.
pub fn ub_gap(t: &Triple) -> Result<f64> {
    let r = BeckRadicands::of(t)?;
    let diff3 = r.difference_times_three();
    if diff3 == 0 {
        return Ok(0.0);
    }
    let r2 = r.original().expect("checked") as f64;
    let r1 = r.corrected_times_three().expect("checked") as f64 / 3.0;
    Ok(0.5 * (diff3 as f64 / 3.0) / (r2.sqrt() + r1.sqrt()))
}

fn strong_failure(instance: &Instance) -> Option<String> {
    if instance.n() < 3 {
        return Some("needs at least three entries".into());
    }
    if !instance.strong_ok() {
        let (i, j) = instance
            .status()
            .witness
            .expect("witness present when strong fails");
        let (x, y) = (instance.entries()[i], instance.entries()[j]);
        return Some(format!(
            "entries not pairwise coprime: gcd({x}, {y}) = {}; the bound can fail here, \
             e.g. F(3,6,19) = 35 exceeds the original bound 34.928519",
            gcd(x, y)
        ));
    }
    None
}

fn weak_failure(instance: &Instance) -> Option<String> {
    (!instance.weak_ok()).then(|| {
        let g = instance.entries().iter().fold(0, |g, &v| gcd(g, v));
        format!("gcd of the entries is {g}, no Frobenius number exists")
    })
}

/// UB₁: the corrected Beck bound.
pub fn ub_beck_corrected(instance: &Instance) -> Result<BoundResult> {
    let value = instance
        .leading_triple()
        .map(|t| ub1_value(&t))
        .transpose()?;
    Ok(BoundResult::new(
        BoundKind::BeckCorrected,
        value,
        strong_failure(instance),
    ))
}

/// UB₂: the original Beck bound.
pub fn ub_beck_original(instance: &Instance) -> Result<BoundResult> {
    let value = instance
        .leading_triple()
        .map(|t| ub2_value(&t))
        .transpose()?;
    Ok(BoundResult::new(
        BoundKind::BeckOriginal,
        value,
        strong_failure(instance),
    ))
}

const CLASSICAL_CAVEAT: &str =
    "checked only for gcd = 1 and sorted entries; the original source may assume more \
     (distinct entries, a1 >= n)";

/// Erdős–Graham, Selmer, Vitek or Fukshansky–Robins.
pub fn ub_classical(instance: &Instance, kind: BoundKind) -> Result<BoundResult> {
    let e = instance.entries();
    let n = e.len();
    let (first, last, second_last) = (e[0] as i128, e[n - 1] as i128, e[n - 2] as i128);
    let nn = n as i128;
    let failure = weak_failure(instance);
    let mut result = match kind {
        BoundKind::ErdosGraham => {
            let v = 2 * second_last * (last / nn) - last;
            BoundResult::new(kind, Some(v as f64), failure)
        }
        BoundKind::Selmer => {
            let v = 2 * last * (first / nn) - first;
            BoundResult::new(kind, Some(v as f64), failure)
        }
        BoundKind::Vitek => {
            if n < 3 {
                BoundResult::new(kind, None, Some("needs at least three entries".into()))
            } else {
                let v = 0.5 * (e[1] as f64 - 1.0) * (last as f64 - 2.0) - 1.0;
                BoundResult::new(kind, Some(v), failure)
            }
        }
        BoundKind::FukshanskyRobins => BoundResult::new(kind, Some(fukshansky_robins(e)), failure),
        other => {
            return Err(Error::Usage(format!("{other} is not a classical bound")));
        }
    };
    result.caveat = Some(CLASSICAL_CAVEAT);
    Ok(result)
}

fn fukshansky_robins(e: &[u64]) -> f64 {
    let n = e.len() as f64;
    let norm_sq: f64 = e.iter().map(|&a| (a as f64).powi(2)).sum();
    let weighted: f64 = e
        .iter()
        .map(|&a| {
            let a = a as f64;
            a * (norm_sq - a * a).max(0.0).sqrt()
        })
        .sum();
    let log_coeff = 2.0 * (n - 1.0).ln() + libm::lgamma((n + 1.0) / 2.0)
        - (n - 1.0) / 2.0 * std::f64::consts::PI.ln();
    (log_coeff.exp() * weighted + 1.0).floor()
}

/// `(a₁ − 1)(a₂ − 1) − 1`: Sylvester's value for the two smallest entries.
pub fn ub_pairwise_sylvester(instance: &Instance) -> Result<BoundResult> {
    let e = instance.entries();
    let v = (e[0] as i128 - 1) * (e[1] as i128 - 1) - 1;
    let failure = (!instance.strong_ok()).then(|| {
        let (i, j) = instance.status().witness.expect("witness present");
        format!("entries not pairwise coprime: gcd({}, {}) > 1", e[i], e[j])
    });
    Ok(BoundResult::new(
        BoundKind::PairwiseSylvester,
        Some(v as f64),
        failure,
    ))
}

/// `o₁ − 2`, with `o₁` the smallest odd entry.
pub fn lower_odd_gap(instance: &Instance) -> Result<BoundResult> {
    match (weak_failure(instance), smallest_odd(instance)) {
        (None, Ok(o1)) => Ok(BoundResult::new(
            BoundKind::OddGapLower,
            Some(o1 as f64 - 2.0),
            None,
        )),
        (None, Err(e)) => Err(e),
        (Some(reason), odd) => Ok(BoundResult::new(
            BoundKind::OddGapLower,
            odd.ok().map(|o| o as f64 - 2.0),
            Some(reason),
        )),
    }
}

pub fn evaluate(instance: &Instance, kind: BoundKind) -> Result<BoundResult> {
    match kind {
        BoundKind::BeckCorrected => ub_beck_corrected(instance),
        BoundKind::BeckOriginal => ub_beck_original(instance),
        BoundKind::PairwiseSylvester => ub_pairwise_sylvester(instance),
        BoundKind::OddGapLower => lower_odd_gap(instance),
        classical => ub_classical(instance, classical),
    }
}

pub fn all_bounds(instance: &Instance) -> Result<Vec<BoundResult>> {
    BoundKind::ALL
        .into_iter()
        .map(|k| evaluate(instance, k))
        .collect()
}

/// UB₂ values printed in the case analysis that shows the original bound
/// still holds for pairwise coprime inputs (six printed decimals).
pub const GOLDEN_UB2: [((u64, u64, u64), f64); 15] = [
    ((2, 5, 7), 8.652476),
    ((2, 7, 9), 14.811762),
    ((2, 9, 11), 22.0),
    ((2, 11, 13), 30.116122),
    ((2, 13, 15), 39.083269),
    ((2, 15, 17), 48.8407169),
    ((3, 4, 5), 7.416408),
    ((3, 5, 7), 12.343135),
    ((3, 7, 8), 18.495454),
    ((3, 8, 11), 27.105118),
    ((3, 10, 11), 32.497191),
    ((4, 5, 7), 15.6643191),
    ((4, 7, 9), 25.496479),
    ((5, 6, 7), 21.740852),
    ((2, 3, 5), 3.660254),
];
