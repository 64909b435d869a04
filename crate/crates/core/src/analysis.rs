//! Tightness comparison of the corrected (UB₁) and original (UB₂) Beck
//! bounds.
//!
//! The gap is `UB₂ − UB₁`, positive when the corrected bound is tighter.
//! Whether UB₂ is at least as sharp is decided exactly through the integer
//! inequality
//!
//! `a₁a₂a₃(a₁+a₂+a₃) ≤ a₁² + a₂² + a₃² + 10(a₁a₂ + a₂a₃ + a₁a₃)`
//!
//! which is `R₂ ≤ R₁` for the two radicands.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundKind};
use crate::exact;
use crate::{gcd, Error, Result, Triple};

/// The exceptional triples as published, in listing order.
pub const PUBLISHED_EXCEPTIONS: [(u64, u64, u64); 30] = [
    (1, 2, 3),
    (1, 2, 5),
    (1, 2, 7),
    (1, 2, 9),
    (1, 2, 11),
    (1, 2, 13),
    (1, 2, 15),
    (1, 2, 17),
    (1, 2, 19),
    (1, 2, 21),
    (1, 2, 23),
    (1, 2, 25),
    (1, 3, 4),
    (1, 3, 5),
    (1, 3, 7),
    (1, 3, 8),
    (1, 3, 10),
    (1, 3, 11),
    (1, 3, 13),
    (1, 3, 14),
    (1, 4, 5),
    (1, 4, 7),
    (1, 4, 9),
    (1, 4, 11),
    (1, 5, 6),
    (1, 5, 7),
    (1, 5, 8),
    (1, 5, 9),
    (1, 6, 7),
    (2, 3, 5),
];

pub fn published_exceptions() -> BTreeSet<Triple> {
    PUBLISHED_EXCEPTIONS
        .iter()
        .map(|&(a, b, c)| Triple::sorted(a, b, c))
        .collect()
}

/// Both sides of the UB₂-versus-UB₁ inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition9 {
    /// `a₁a₂a₃(a₁+a₂+a₃)`
    pub lhs: u128,
    /// `a₁² + a₂² + a₃² + 10(a₁a₂ + a₂a₃ + a₁a₃)`
    pub rhs: u128,
}

impl Condition9 {
    pub fn of(t: &Triple) -> Self {
        let (a, b, c) = (t.a1 as u128, t.a2 as u128, t.a3 as u128);
        Condition9 {
            lhs: a * b * c * (a + b + c),
            rhs: a * a + b * b + c * c + 10 * (a * b + b * c + a * c),
        }
    }

    /// `UB₂ ≤ UB₁`
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    /// `UB₂ < UB₁`
    pub fn holds_strictly(&self) -> bool {
        self.lhs < self.rhs
    }

    pub fn is_tie(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn excess(&self) -> i128 {
        self.lhs as i128 - self.rhs as i128
    }
}

/// True iff the original bound is no worse than the corrected one.
pub fn ub2_not_worse(t: &Triple) -> bool {
    Condition9::of(t).holds()
}

fn check_sorted(t: &Triple) -> Result<()> {
    if t.a1 == 0 || !(t.a1 <= t.a2 && t.a2 <= t.a3) {
        return Err(Error::Usage(format!("{t} is not a sorted positive triple")));
    }
    Ok(())
}

/// `UB₂ − UB₁` for a pairwise coprime sorted triple.
pub fn tightness_gap(t: &Triple) -> Result<f64> {
    check_sorted(t)?;
    if !t.is_pairwise_coprime() {
        return Err(Error::NotApplicable {
            kind: BoundKind::BeckOriginal.to_string(),
            reason: format!("{t} is not pairwise coprime"),
        });
    }
    bounds::ub_gap(t)
}

/// Small-`a₃` approximation of the gap magnitude,
/// `½ a₁a₂ (√3 − √(2 + 11/(a₁a₂)))`.
///
/// Tracks the gap when all three entries are close; when `a₁ ≪ a₂ ≈ a₃`
/// it underestimates.
pub fn approx_gap(a1: u64, a2: u64) -> f64 {
    let p = a1 as f64 * a2 as f64;
    0.5 * p * (3f64.sqrt() - (2.0 + 11.0 / p).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub triple: Triple,
    pub ub1: f64,
    pub ub2: f64,
    /// `ub2 − ub1`
    pub gap: f64,
    pub sum: u64,
    pub prod12: u64,
    pub prod123: u64,
    pub frobenius: Option<i64>,
}

impl ComparisonRecord {
    pub fn new(triple: Triple, frobenius: Option<i64>) -> Result<Self> {
        check_sorted(&triple)?;
        let key = |v: u128| u64::try_from(v).map_err(|_| Error::Overflow("record key"));
        Ok(ComparisonRecord {
            triple,
            ub1: bounds::ub1_value(&triple)?,
            ub2: bounds::ub2_value(&triple)?,
            gap: bounds::ub_gap(&triple)?,
            sum: key(triple.sum())?,
            prod12: key(triple.prod12())?,
            prod123: key(triple.prod123())?,
            frobenius,
        })
    }

    pub fn with_exact(triple: Triple) -> Result<Self> {
        let f = exact::frobenius_exact(&triple.to_instance())?;
        Self::new(triple, Some(f))
    }

    /// Exact verdict that UB₂ is strictly sharper.
    pub fn ub2_strictly_sharper(&self) -> bool {
        Condition9::of(&self.triple).holds_strictly()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    /// Admit `a₁ = a₂ = 1`, which gives the infinite family `(1, 1, k)`.
    pub allow_repeats: bool,
    /// Largest `a₃` scanned for the `(1, 1, k)` family.
    pub repeat_cap: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            allow_repeats: false,
            repeat_cap: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalTriple {
    pub triple: Triple,
    pub condition: Condition9,
    /// `UB₁ = UB₂` exactly.
    pub tie: bool,
}

/// Largest product `a₁a₂` for which UB₂ can be no worse than UB₁ (with
/// `a₁ < a₂ < a₃`): for `a₁a₂ ≥ 33` the left side exceeds `33a₃²`, which
/// exceeds the right side.
pub const MAX_EXCEPTIONAL_PROD12: u64 = 32;

/// Last `a₃` worth scanning for a pair: the larger root of
/// `(p−1)a₃² + (p−10)(a₁+a₂)a₃ − (a₁² + a₂² + 10a₁a₂)`, plus a margin of 10.
/// `None` when `a₁a₂ = 1`, where the expression never turns positive.
pub fn scan_limit(a1: u64, a2: u64) -> Option<u64> {
    let p = (a1 * a2) as f64;
    if p <= 1.0 {
        return None;
    }
    let s = (a1 + a2) as f64;
    let (qa, qb) = (p - 1.0, (p - 10.0) * s);
    let qk = (a1 * a1 + a2 * a2 + 10 * a1 * a2) as f64;
    let root = (-qb + (qb * qb + 4.0 * qa * qk).sqrt()) / (2.0 * qa);
    Some((root.ceil().max(a2 as f64) as u64) + 10)
}

/// Pairwise coprime triples (strictly increasing unless repeats are
/// allowed) where UB₂ ≤ UB₁, in lexicographic order. Exact ties are kept
/// and flagged.
pub fn enumerate_exceptional(opts: EnumerationOptions) -> Vec<ExceptionalTriple> {
    let mut out = Vec::new();
    for a1 in 1..=MAX_EXCEPTIONAL_PROD12 {
        let first_a2 = if opts.allow_repeats { a1 } else { a1 + 1 };
        for a2 in first_a2..=MAX_EXCEPTIONAL_PROD12 / a1 {
            if gcd(a1, a2) != 1 {
                continue;
            }
            let last = match scan_limit(a1, a2) {
                Some(l) => l,
                None => opts.repeat_cap,
            };
            let first_a3 = if opts.allow_repeats { a2 } else { a2 + 1 };
            for a3 in first_a3..=last {
                let t = Triple { a1, a2, a3 };
                if !t.is_pairwise_coprime() {
                    continue;
                }
                let condition = Condition9::of(&t);
                if condition.holds() {
                    out.push(ExceptionalTriple {
                        triple: t,
                        condition,
                        tie: condition.is_tie(),
                    });
                }
            }
        }
    }
    out
}

pub fn enumerate_exceptional_triples() -> Vec<Triple> {
    enumerate_exceptional(EnumerationOptions::default())
        .into_iter()
        .map(|e| e.triple)
        .collect()
}

/// Differences between an enumeration and the published list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListDiscrepancy {
    /// Published but not found, with the exact inequality sides.
    pub missing: Vec<(Triple, Condition9)>,
    /// Found but not published.
    pub extra: Vec<(Triple, Condition9)>,
}

impl ListDiscrepancy {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_with_published(found: &[Triple]) -> ListDiscrepancy {
    let published = published_exceptions();
    let found: BTreeSet<Triple> = found.iter().copied().collect();
    let tag = |t: &Triple| (*t, Condition9::of(t));
    ListDiscrepancy {
        missing: published.difference(&found).map(tag).collect(),
        extra: found.difference(&published).map(tag).collect(),
    }
}

/// Strictly increasing pairwise coprime triples with entries `≤ max_entry`
/// and `a₁a₂ ≥ 33` where UB₂ is nonetheless no worse. Expected empty.
pub fn threshold_violations(max_entry: u64) -> Vec<Triple> {
    let mut out = Vec::new();
    for a1 in 1..=max_entry {
        for a2 in a1 + 1..=max_entry {
            if a1 * a2 <= MAX_EXCEPTIONAL_PROD12 || gcd(a1, a2) != 1 {
                continue;
            }
            for a3 in a2 + 1..=max_entry {
                let t = Triple { a1, a2, a3 };
                if t.is_pairwise_coprime() && ub2_not_worse(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn ensure_passed(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.passed) {
            None => Ok(self),
            Some(c) => Err(Error::Verification(format!("{}: {}", c.name, c.detail))),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

/// Printed bracket for `½(6√266 − 28)`.
pub const COUNTEREXAMPLE_UB2_RANGE: (f64, f64) = (34.92851, 34.92852);

/// Reproduces the two failures of the original bound outside pairwise
/// coprimality: `(3, 6, 19)` and `(2, 4, 6, 9)`.
pub fn verify_counterexamples() -> Result<VerificationReport> {
    let mut checks = Vec::new();

    let a = crate::Instance::validate(&[3, 6, 19])?;
    let f = exact::frobenius_exact(&a)?;
    let f_sieve = exact::frobenius_oracle(&a, 100)?;
    let ub2 = bounds::ub_beck_original(&a)?;
    let v = ub2.value.expect("three entries");
    let (lo, hi) = COUNTEREXAMPLE_UB2_RANGE;
    checks.push(Check {
        name: "F(3,6,19) exceeds UB2".into(),
        passed: f == 35
            && f_sieve == 35
            && (lo..=hi).contains(&v)
            && (f as f64) > v
            && !ub2.applicable,
        detail: format!(
            "F = {f} (sieve {f_sieve}), UB2 = {v:.6}, applicable = {}",
            ub2.applicable
        ),
        margin: Some(f as f64 - v),
    });

    let a = crate::Instance::validate(&[2, 4, 6, 9])?;
    let head = crate::Instance::validate(&[2, 4, 6])?;
    let ub2 = bounds::ub_beck_original(&head)?
        .value
        .expect("three entries");
    let lower = bounds::lower_odd_gap(&a)?.value.expect("odd entry");
    // 9 is odd and every smaller odd number is out of reach; 100 is well past
    // a1 * a4 = 18, which bounds F.
    let f_sieve = exact::frobenius_oracle(&a, 100)?;
    let f = exact::frobenius_exact(&a)?;
    checks.push(Check {
        name: "F(2,4,6,9) exceeds UB2(2,4,6)".into(),
        passed: ub2 == 6.0 && lower >= 7.0 && f_sieve == 7 && f == 7 && (f as f64) > ub2,
        detail: format!("UB2(2,4,6) = {ub2:.6}, o1 - 2 = {lower}, F = {f} (sieve {f_sieve})"),
        margin: Some(f as f64 - ub2),
    });

    Ok(VerificationReport { checks })
}

/// Recomputes the fifteen printed UB₂ values to within `1e-4`, and checks
/// the pairwise-Sylvester value stays strictly below each.
pub fn verify_golden_table() -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for ((a, b, c), printed) in bounds::GOLDEN_UB2 {
        let t = Triple::sorted(a, b, c);
        let v = bounds::ub2_value(&t)?;
        let sylvester = (a as f64 - 1.0) * (b as f64 - 1.0) - 1.0;
        let err = (v - printed).abs();
        checks.push(Check {
            name: format!("UB2{t}"),
            passed: err < 1e-4 && sylvester < v,
            detail: format!("computed {v:.7}, printed {printed}, (a1-1)(a2-1)-1 = {sylvester}"),
            margin: Some(err),
        });
    }
    Ok(VerificationReport { checks })
}

pub fn verify_all() -> Result<VerificationReport> {
    let mut report = verify_counterexamples()?;
    report.extend(verify_golden_table()?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_examples() {
        let g = tightness_gap(&Triple::sorted(2, 3, 5)).unwrap();
        assert!((g - (3.660254 - 3.888194)).abs() < 1e-5);
        assert!(tightness_gap(&Triple::sorted(5, 7, 9)).unwrap() > 0.0);
        assert!(tightness_gap(&Triple::sorted(1, 2, 3)).unwrap() < 0.0);
        assert!(matches!(
            tightness_gap(&Triple::sorted(3, 6, 19)),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn condition9_examples() {
        let c = Condition9::of(&Triple::sorted(2, 3, 5));
        assert_eq!((c.lhs, c.rhs), (300, 348));
        assert!(ub2_not_worse(&Triple::sorted(2, 3, 5)));
        let c = Condition9::of(&Triple::sorted(5, 7, 9));
        assert_eq!((c.lhs, c.rhs), (6615, 1585));
        assert!(!c.holds());
    }

    #[test]
    fn tie_at_1_2_25() {
        let c = Condition9::of(&Triple::sorted(1, 2, 25));
        assert_eq!((c.lhs, c.rhs), (1400, 1400));
        assert!(c.is_tie());
        assert_eq!(tightness_gap(&Triple::sorted(1, 2, 25)).unwrap(), 0.0);
    }

    #[test]
    fn enumeration_reproduces_published_list() {
        let found = enumerate_exceptional_triples();
        assert_eq!(found.len(), 30);
        assert!(compare_with_published(&found).is_empty());
        assert_eq!(found.first(), Some(&Triple::sorted(1, 2, 3)));
        assert_eq!(found.last(), Some(&Triple::sorted(2, 3, 5)));
        assert!(!found.contains(&Triple::sorted(5, 7, 9)));
        let expected: Vec<Triple> = PUBLISHED_EXCEPTIONS
            .iter()
            .map(|&(a, b, c)| Triple::sorted(a, b, c))
            .collect();
        assert_eq!(found, expected);
    }

    #[test]
    fn only_tie_is_1_2_25() {
        let ties: Vec<_> = enumerate_exceptional(EnumerationOptions::default())
            .into_iter()
            .filter(|e| e.tie)
            .map(|e| e.triple)
            .collect();
        assert_eq!(ties, vec![Triple::sorted(1, 2, 25)]);
    }

    #[test]
    fn repeats_add_the_one_one_family() {
        let opts = EnumerationOptions {
            allow_repeats: true,
            repeat_cap: 40,
        };
        let found = enumerate_exceptional(opts);
        let extra: Vec<_> = found
            .iter()
            .map(|e| e.triple)
            .filter(|t| !published_exceptions().contains(t))
            .collect();
        assert_eq!(extra.len(), 40);
        assert!(extra.iter().all(|t| t.a1 == 1 && t.a2 == 1));
    }

    #[test]
    fn scan_limit_covers_brute_force() {
        for a1 in 1..=MAX_EXCEPTIONAL_PROD12 {
            for a2 in a1 + 1..=MAX_EXCEPTIONAL_PROD12 / a1 {
                let limit = scan_limit(a1, a2).unwrap();
                for a3 in limit + 1..=10 * limit {
                    assert!(!ub2_not_worse(&Triple { a1, a2, a3 }), "({a1},{a2},{a3})");
                }
                // Once positive and increasing for three steps, it stays so.
                let excess: Vec<i128> = (a2 + 1..=10 * limit)
                    .map(|a3| Condition9::of(&Triple { a1, a2, a3 }).excess())
                    .collect();
                if let Some(i) = excess
                    .windows(3)
                    .position(|w| w[0] > 0 && w[0] < w[1] && w[1] < w[2])
                {
                    assert!(excess[i..].iter().all(|&e| e > 0));
                }
            }
        }
    }

    #[test]
    fn exceptional_triples_respect_both_bounds() {
        for e in enumerate_exceptional(EnumerationOptions::default()) {
            let r = ComparisonRecord::with_exact(e.triple).unwrap();
            let f = r.frobenius.unwrap() as f64;
            assert!(f <= r.ub2 && r.ub2 <= r.ub1 + 1e-12, "{}", e.triple);
        }
    }

    #[test]
    fn predicate_agrees_with_gap_sign() {
        for a1 in 1..30u64 {
            for a2 in a1 + 1..40 {
                for a3 in a2 + 1..60 {
                    let t = Triple { a1, a2, a3 };
                    if !t.is_pairwise_coprime() {
                        continue;
                    }
                    let g = tightness_gap(&t).unwrap();
                    if ub2_not_worse(&t) {
                        assert!(g <= 1e-9, "{t} {g}");
                    } else {
                        assert!(g > -1e-9, "{t} {g}");
                    }
                }
            }
        }
    }

    #[test]
    fn approx_gap_examples() {
        assert!(approx_gap(1, 11).abs() < 1e-12);
        let expected = 500.0 * (3f64.sqrt() - (2.0 + 11.0 / 1000.0f64).sqrt());
        assert!((approx_gap(10, 100) - expected).abs() < 1e-9);
        let ratio = approx_gap(1_000_000, 1_000_000) / 1e12;
        assert!((ratio - (3f64.sqrt() - 2f64.sqrt()) / 2.0).abs() < 1e-6);
    }

    #[test]
    fn approx_gap_tracks_near_equal_entries() {
        for x in (51..1000).step_by(50) {
            let t = Triple::sorted(x, x + 1, x + 2);
            let g = tightness_gap(&t).unwrap();
            let approx = approx_gap(t.a1, t.a2);
            assert!((g / approx - 1.0).abs() < 0.15, "{t} {g} {approx}");
        }
    }

    #[test]
    fn counterexamples_verify() {
        let report = verify_counterexamples().unwrap();
        assert!(report.passed(), "{report:?}");
        assert!((report.checks[0].margin.unwrap() - 0.071481).abs() < 1e-5);
        assert_eq!(report.checks[1].margin, Some(1.0));
        assert_eq!(verify_counterexamples().unwrap(), report);
    }

    #[test]
    fn golden_table_verifies() {
        let report = verify_golden_table().unwrap();
        assert_eq!(report.checks.len(), 15);
        assert!(report.ensure_passed().is_ok());
    }

    #[test]
    fn record_keys() {
        let r = ComparisonRecord::new(Triple::sorted(7, 3, 10), None).unwrap();
        assert_eq!((r.sum, r.prod12, r.prod123), (20, 21, 210));
        assert_eq!(r.gap, bounds::ub_gap(&r.triple).unwrap());
    }
}
