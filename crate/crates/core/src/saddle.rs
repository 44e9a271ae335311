//! The saddle point `alpha(x, y)` and the scale quantities `u`, `L`, `M`.
//!
//! `alpha(x, y)` is the unique positive root of
//!
//! ```text
//! F(alpha) = sum_{p <= y} log p / (p^alpha - 1) - log x
//! ```
//!
//! `F` decreases strictly from `+inf` (as `alpha -> 0+`) to `-log x` (as
//! `alpha -> inf`), so a sign-changing bracket always exists for `x > 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes_smooth::{lattice_floor, SpfSieve};

pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleAlpha {
    pub alpha: f64,
    /// `F(alpha)` at the returned root.
    pub residual: f64,
    pub x: f64,
    pub y: f64,
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `sum_{p in primes} log p / (p^alpha - 1)`.
pub fn saddle_sum(primes: &[u32], alpha: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    for &p in primes {
        let lp = (p as f64).ln();
        acc.add(lp / (alpha * lp).exp_m1());
    }
    acc.value()
}

// (F(alpha) + log x, F'(alpha))
fn sum_and_slope(primes: &[u32], alpha: f64) -> (f64, f64) {
    let mut s = CompensatedSum::default();
    let mut ds = CompensatedSum::default();
    for &p in primes {
        let lp = (p as f64).ln();
        let em1 = (alpha * lp).exp_m1();
        if !em1.is_finite() {
            continue;
        }
        s.add(lp / em1);
        // d/dalpha log p / (p^a - 1) = -log^2 p * p^a / (p^a - 1)^2
        ds.add(-lp * lp * (em1 + 1.0) / (em1 * em1));
    }
    (s.value(), ds.value())
}

/// Solves for `alpha(x, y)` using the primes of `sieve`. Fails if `y`
/// exceeds the sieve limit.
pub fn solve_alpha(sieve: &SpfSieve, x: f64, y: f64, tol: f64) -> Result<SaddleAlpha> {
    if y.is_finite() && lattice_floor(y) > sieve.limit() {
        return Err(Error::Range(format!(
            "y = {y} exceeds the sieve limit {}",
            sieve.limit()
        )));
    }
    solve_alpha_with_primes(sieve.primes_up_to(y), x, y, tol)
}

/// Solves for `alpha(x, y)` given the full list of primes `<= y`.
pub fn solve_alpha_with_primes(primes: &[u32], x: f64, y: f64, tol: f64) -> Result<SaddleAlpha> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must exceed 1, got {x}")));
    }
    if !(y >= 2.0) || !y.is_finite() {
        return Err(Error::Domain(format!("y must be at least 2, got {y}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if primes.is_empty() {
        return Err(Error::Domain("no primes supplied".into()));
    }
    let log_x = x.ln();
    let f = |a: f64| saddle_sum(primes, a) - log_x;

    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    while f(lo) <= 0.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            return Err(Error::Solver("no positive bracket below the root".into()));
        }
    }
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Solver("no negative bracket above the root".into()));
        }
    }
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);

    for _ in 0..60 {
        if hi - lo < 1e-6 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut alpha = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS {
        let (s, ds) = sum_and_slope(primes, alpha);
        let residual = s - log_x;
        if residual.abs() <= tol {
            return Ok(SaddleAlpha { alpha, residual, x, y });
        }
        if residual > 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let newton = alpha - residual / ds;
        alpha = if newton > lo && newton < hi && ds < 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let residual = f(alpha);
    if residual.abs() <= tol {
        return Ok(SaddleAlpha { alpha, residual, x, y });
    }
    Err(Error::Solver(format!(
        "alpha({x}, {y}) did not reach tolerance {tol}; residual {residual:e}"
    )))
}

/// `u`, `L` and `M` for a given rational approximation `a/q + delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundScales {
    /// `log x / log y`.
    pub u: f64,
    /// `2 (1 + |delta x|)`.
    #[serde(rename = "L")]
    pub l: f64,
    /// `u^{3/2} log u log x (log L)^{1/2} (log qy)^{1/2}`.
    #[serde(rename = "M")]
    pub m: f64,
}

/// Computes `u = log x / log y`, `L = 2(1 + |delta x|)` and
/// `M = u^{3/2} log u log x (log L)^{1/2} (log qy)^{1/2}`.
///
/// `u` is taken with `log x` on top so that `u >= 1` whenever `y <= x`,
/// which keeps `log u >= 0`.
pub fn bound_scales(x: f64, y: f64, q: u64, delta: f64) -> Result<BoundScales> {
    if !(y >= 2.0) || !y.is_finite() {
        return Err(Error::Domain(format!("y must be at least 2, got {y}")));
    }
    if !x.is_finite() || !delta.is_finite() {
        return Err(Error::Domain("x and delta must be finite".into()));
    }
    if q == 0 {
        return Err(Error::Domain("q must be a positive integer".into()));
    }
    let qy = q as f64 * y;
    if qy <= 1.0 {
        return Err(Error::Domain(format!("q*y = {qy} must exceed 1")));
    }
    let u = x.ln() / y.ln();
    if u < 1.0 {
        return Err(Error::Domain(format!(
            "u = log x / log y = {u} is below 1 (requires x >= y)"
        )));
    }
    let l = 2.0 * (1.0 + (delta * x).abs());
    let m = u.powf(1.5) * u.ln() * x.ln() * l.ln().sqrt() * qy.ln().sqrt();
    Ok(BoundScales { u, l, m })
}
