//! Smooth numbers in Beatty sequences.
//!
//! Exact counting of `y`-smooth integers, the saddle point `alpha(x, y)`,
//! exact Beatty arithmetic over quadratic irrationals, exponential sums over
//! smooth numbers, the associated bound formulas, the Erdős–Turán
//! inequality, and an experiment harness built on top of them.

pub mod beatty;
pub mod diophantine;
pub mod error;
pub mod expsum;
pub mod primes_smooth;
pub mod saddle;
pub mod verify;

pub use error::{Error, Result};
