//! Fourier–Dedekind sums.
//!
//! `σ_t(c₁, …, cₙ; c) = (1/c) Σ_{λ^c = 1, λ ≠ 1} λ^t / Π (λ^{cᵢ} - 1)`
//!
//! evaluated two ways: directly over the complex roots of unity, and, for
//! two arguments, through the finite sawtooth identity
//!
//! `σ_t(a, b; c) = Σ_{m=0}^{c-1} ((-a⁻¹(bm + t)/c)) ((m/c)) - 1/(4c)`
//!
//! with `((x)) = x - ⌊x⌋ - 1/2`. The identity holds only when the sawtooth
//! takes the value `-1/2` at integers ([`SawtoothConvention::Literal`]); the
//! usual Dedekind convention of `0` at integers does not reproduce the
//! roots-of-unity value. [`check_conventions`] reports both errors.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{gcd, Error, Result};

/// Largest modulus the roots-of-unity route accepts.
pub const MAX_MODULUS: u64 = 10_000;

/// Largest tolerated imaginary residue of the roots-of-unity sum.
pub const IMAG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedekindParams {
    args: Vec<i64>,
    modulus: u64,
    shift: i64,
}

impl DedekindParams {
    pub fn new(args: Vec<i64>, modulus: u64, shift: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Usage("Fourier–Dedekind modulus must be >= 1".into()));
        }
        for &a in &args {
            let g = gcd(a.unsigned_abs(), modulus);
            if g != 1 {
                return Err(Error::NotCoprime {
                    a,
                    b: modulus as i64,
                    gcd: g,
                });
            }
        }
        Ok(DedekindParams {
            args,
            modulus,
            shift,
        })
    }

    pub fn args(&self) -> &[i64] {
        &self.args
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SawtoothConvention {
    /// `((n)) = -1/2` at integers.
    Literal,
    /// `((n)) = 0` at integers.
    Conventional,
}

/// `x - ⌊x⌋ - 1/2`, including at integers.
pub fn sawtooth(x: f64) -> f64 {
    x - x.floor() - 0.5
}

/// `((num / den))` computed from the residue of `num`, so integer arguments
/// are detected exactly.
pub fn sawtooth_ratio(num: i64, den: u64, convention: SawtoothConvention) -> f64 {
    let r = (num as i128).rem_euclid(den as i128);
    if r == 0 && convention == SawtoothConvention::Conventional {
        return 0.0;
    }
    r as f64 / den as f64 - 0.5
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m = m as i128;
    let (mut old_r, mut r) = ((a as i128).rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m) as u64)
}

/// Precomputed `c`-th roots of unity, reusable across arguments and shifts.
#[derive(Debug, Clone)]
pub struct UnityRoots {
    modulus: u64,
    roots: Vec<Complex64>,
}

impl UnityRoots {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Usage("Fourier–Dedekind modulus must be >= 1".into()));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::ResourceExhausted {
                what: "Fourier–Dedekind modulus",
                limit: MAX_MODULUS,
            });
        }
        let c = modulus as f64;
        let roots = (0..modulus)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / c))
            .collect();
        Ok(UnityRoots { modulus, roots })
    }

    fn power(&self, k: u64, e: i64) -> Complex64 {
        let idx = (k as i128 * e as i128).rem_euclid(self.modulus as i128);
        self.roots[idx as usize]
    }

    /// `σ_shift(args; c)`; arguments must already be coprime to `c`.
    pub fn sum(&self, args: &[i64], shift: i64) -> Result<f64> {
        let c = self.modulus;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 1..c {
            let denom = args.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
                acc * (self.power(k, a) - 1.0)
            });
            total += self.power(k, shift) / denom;
        }
        total /= c as f64;
        if total.im.abs() >= IMAG_TOLERANCE {
            return Err(Error::NonReal { imag: total.im });
        }
        Ok(total.re)
    }
}

/// Fourier–Dedekind sum over the nontrivial `c`-th roots of unity.
pub fn fd_roots_of_unity(params: &DedekindParams) -> Result<f64> {
    UnityRoots::new(params.modulus)?.sum(&params.args, params.shift)
}

/// `σ_t(a, b; c)` from the sawtooth identity with the literal convention.
pub fn fd_sawtooth(a: i64, b: i64, c: u64, t: i64) -> Result<f64> {
    fd_sawtooth_with(a, b, c, t, SawtoothConvention::Literal)
}

pub fn fd_sawtooth_with(
    a: i64,
    b: i64,
    c: u64,
    t: i64,
    convention: SawtoothConvention,
) -> Result<f64> {
    let (num, den) = fd_sawtooth_exact(a, b, c, t, convention)?;
    Ok(num as f64 / den as f64)
}

/// The sawtooth route as an exact fraction `num / (4c²)`.
///
/// With `x = r/c`, `((x)) = (2r - c) / (2c)`, so every product in the sum
/// has denominator `4c²` and the correction `-1/(4c)` is `-c / (4c²)`.
pub fn fd_sawtooth_exact(
    a: i64,
    b: i64,
    c: u64,
    t: i64,
    convention: SawtoothConvention,
) -> Result<(i128, i128)> {
    if c == 0 {
        return Err(Error::Usage("Fourier–Dedekind modulus must be >= 1".into()));
    }
    let g = gcd(b.unsigned_abs(), c);
    if g != 1 {
        return Err(Error::NotCoprime {
            a: b,
            b: c as i64,
            gcd: g,
        });
    }
    let a_inv = mod_inverse(a, c).ok_or(Error::NotInvertible {
        value: a,
        modulus: c,
    })?;
    let ci = c as i128;
    let doubled = |r: i128| -> i128 {
        if r == 0 && convention == SawtoothConvention::Conventional {
            0
        } else {
            2 * r - ci
        }
    };
    let mut num = 0i128;
    for m in 0..ci {
        let arg = (-(a_inv as i128) * (b as i128 * m + t as i128)).rem_euclid(ci);
        num += doubled(arg) * doubled(m);
    }
    Ok((num - ci, 4 * ci * ci))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConventionCheck {
    pub roots_of_unity: f64,
    pub literal: f64,
    pub conventional: f64,
}

impl ConventionCheck {
    pub fn literal_error(&self) -> f64 {
        (self.roots_of_unity - self.literal).abs()
    }

    pub fn conventional_error(&self) -> f64 {
        (self.roots_of_unity - self.conventional).abs()
    }

    /// Conventions whose sawtooth value is within `tol` of the roots-of-unity
    /// value.
    pub fn reconciling(&self, tol: f64) -> Vec<SawtoothConvention> {
        let mut out = Vec::new();
        if self.literal_error() < tol {
            out.push(SawtoothConvention::Literal);
        }
        if self.conventional_error() < tol {
            out.push(SawtoothConvention::Conventional);
        }
        out
    }
}

/// Evaluates `σ_t(a, b; c)` by both routes and both sawtooth conventions.
pub fn check_conventions(roots: &UnityRoots, a: i64, b: i64, t: i64) -> Result<ConventionCheck> {
    let c = roots.modulus;
    DedekindParams::new(vec![a, b], c, t)?;
    Ok(ConventionCheck {
        roots_of_unity: roots.sum(&[a, b], t)?,
        literal: fd_sawtooth_with(a, b, c, t, SawtoothConvention::Literal)?,
        conventional: fd_sawtooth_with(a, b, c, t, SawtoothConvention::Conventional)?,
    })
}

/// `-c/12 - 5/(12c)`, the lower bound for `σ_t(a, b; c)`.
pub fn sigma_lower_bound(c: u64) -> f64 {
    let c = c as f64;
    -c / 12.0 - 5.0 / (12.0 * c)
}

/// Quadratic lower bound on the number of strictly positive representations
/// of `t` by pairwise coprime `a, b, c`.
pub fn p_prime_lower_bound(a: u64, b: u64, c: u64, t: i64) -> f64 {
    let (a, b, c, t) = (a as f64, b as f64, c as f64, t as f64);
    t * t / (2.0 * a * b * c) - t / 2.0 * (1.0 / (a * b) + 1.0 / (a * c) + 1.0 / (b * c))
        + (a / (b * c) + b / (a * c) + c / (a * b)) / 12.0
        - (a + b + c) / 12.0
        - (1.0 / a + 1.0 / b + 1.0 / c) / 6.0
}
