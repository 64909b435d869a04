//! Exact arithmetic for the Frobenius coin problem.
//!
//! The crate computes Frobenius numbers exactly (Apéry-table shortest paths,
//! with an independent dynamic-programming sieve as oracle), evaluates the
//! classical and Beck-style upper bounds together with their applicability
//! conditions, compares the original and corrected Beck bounds, and runs a
//! deterministic Monte Carlo study of their relative tightness.
//!
//! ```
//! use frobenius::{exact, Instance};
//!
//! let a = Instance::validate(&[19, 3, 6]).unwrap();
//! assert_eq!(a.entries(), &[3, 6, 19]);
//! assert_eq!(exact::frobenius_exact(&a).unwrap(), 35);
//! ```

pub mod analysis;
pub mod bounds;
pub mod dedekind;
pub mod emit;
mod error;
pub mod exact;
pub mod instance;
pub mod montecarlo;

pub use error::{Error, Result};
pub use instance::{gcd, gcd_of, smallest_odd, ConditionStatus, Instance, Triple};
