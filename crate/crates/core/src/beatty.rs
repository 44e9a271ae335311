//! Beatty sequences `B(x) = { floor(theta n + psi) : 1 <= n <= x }` with
//! exact arithmetic, their membership criterion, and smooth-member counts.
//!
//! An integer `m` is a term exactly when `0 < {(m + 1 - psi)/theta} <= 1/theta`
//! and the index `n = floor((m + 1 - psi)/theta)` is at least 1. For
//! irrational `theta` and rational `psi` the fractional part never vanishes;
//! for rational `theta` the strict inequality excludes the boundary case.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::diophantine::{floor_surd_i128, quad_floor, sign_surd_i128, QuadNum};
use crate::error::{Error, Result};
use crate::primes_smooth::{lattice_floor, SpfSieve};

// Machine-integer coefficients, when they fit.
#[derive(Clone, Copy, Debug)]
struct Kernel {
    // theta = (a + b sqrt d) / c
    a: i128,
    b: i128,
    c: i128,
    // 1/theta = (ia + ib sqrt d) / ic
    ia: i128,
    ib: i128,
    ic: i128,
    d: u128,
    // psi = r / s
    r: i128,
    s: i128,
}

impl Kernel {
    fn build(theta: &QuadNum, inv: &QuadNum, psi: &BigRational) -> Option<Self> {
        Some(Self {
            a: theta.a().to_i128()?,
            b: theta.b().to_i128()?,
            c: theta.c().to_i128()?,
            ia: inv.a().to_i128()?,
            ib: inv.b().to_i128()?,
            ic: inv.c().to_i128()?,
            d: theta.d().to_u128()?,
            r: psi.numer().to_i128()?,
            s: psi.denom().to_i128()?,
        })
    }

    #[inline]
    fn term(&self, n: u64) -> Option<i128> {
        let n = n as i128;
        let num_a = self
            .s
            .checked_mul(self.a)?
            .checked_mul(n)?
            .checked_add(self.c.checked_mul(self.r)?)?;
        let num_b = self.s.checked_mul(self.b)?.checked_mul(n)?;
        floor_surd_i128(num_a, num_b, self.d, self.c.checked_mul(self.s)?)
    }

    #[inline]
    fn contains(&self, m: u64) -> Option<bool> {
        let k = (m as i128 + 1).checked_mul(self.s)?.checked_sub(self.r)?;
        if k <= 0 {
            return Some(false);
        }
        // (m + 1 - psi)/theta = (k ia + k ib sqrt d) / (s ic)
        let ka = k.checked_mul(self.ia)?;
        let kb = k.checked_mul(self.ib)?;
        let den = self.s.checked_mul(self.ic)?;
        let fl = floor_surd_i128(ka, kb, self.d, den)?;
        if fl < 1 {
            return Some(false);
        }
        let shifted = ka.checked_sub(fl.checked_mul(den)?)?;
        let positive = sign_surd_i128(shifted, kb, self.d)? == Ordering::Greater;
        if self.ib != 0 {
            debug_assert!(positive, "fractional part vanished for irrational theta");
        }
        let below = sign_surd_i128(
            shifted.checked_sub(self.s.checked_mul(self.ia)?)?,
            (k - self.s).checked_mul(self.ib)?,
            self.d,
        )? != Ordering::Greater;
        Some(positive && below)
    }
}

/// `(theta, psi)` with `theta > 1` and `psi >= 0`, both exact.
#[derive(Clone, Debug)]
pub struct BeattyParams {
    theta: QuadNum,
    theta_inv: QuadNum,
    psi: BigRational,
    kernel: Option<Kernel>,
}

impl BeattyParams {
    pub fn new(theta: QuadNum, psi: BigRational) -> Result<Self> {
        if theta <= QuadNum::from_integer(1) {
            return Err(Error::Domain(format!("theta = {theta} must exceed 1")));
        }
        if psi.is_negative() {
            return Err(Error::Domain(format!("psi = {psi} must be non-negative")));
        }
        let theta_inv = theta.recip()?;
        let kernel = Kernel::build(&theta, &theta_inv, &psi);
        Ok(Self {
            theta,
            theta_inv,
            psi,
            kernel,
        })
    }

    pub fn theta(&self) -> &QuadNum {
        &self.theta
    }

    pub fn psi(&self) -> &BigRational {
        &self.psi
    }

    /// `floor(theta n + psi)`.
    pub fn term(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("Beatty index must be at least 1".into()));
        }
        let big = match self.kernel.and_then(|k| k.term(n)) {
            Some(v) => BigInt::from(v),
            None => quad_floor(&self.theta, n, &self.psi),
        };
        big.to_u64()
            .ok_or_else(|| Error::Range(format!("term {n} = {big} does not fit in 64 bits")))
    }

    /// `floor(theta x + psi)` for real `x >= 0`, the largest value taken by
    /// a term with index at most `x`.
    pub fn last_value(&self, x: f64) -> Result<u64> {
        let n = lattice_floor(x);
        if n == 0 {
            return Ok(0);
        }
        self.term(n)
    }

    /// Whether `m` equals `floor(theta n + psi)` for some `n >= 1`.
    pub fn contains(&self, m: u64) -> Result<bool> {
        if m == 0 {
            return Err(Error::Domain("membership is defined for m >= 1".into()));
        }
        if let Some(v) = self.kernel.and_then(|k| k.contains(m)) {
            return Ok(v);
        }
        let k = BigRational::from_integer(BigInt::from(m) + 1) - &self.psi;
        if !k.is_positive() {
            return Ok(false);
        }
        let ratio = self.theta_inv.mul_ratio(&k);
        let (fl, frac) = ratio.split_floor();
        let positive = frac.signum() == Ordering::Greater;
        if !self.theta.is_rational() {
            debug_assert!(positive, "fractional part vanished for irrational theta");
        }
        Ok(fl >= BigInt::from(1) && positive && frac <= self.theta_inv)
    }

    /// Iterator over `floor(theta n + psi)` for `n = 1, 2, ...`.
    pub fn terms(&self) -> impl Iterator<Item = Result<u64>> + '_ {
        (1..).map(move |n| self.term(n))
    }
}

/// `|{ n <= x : P(floor(theta n + psi)) <= y }|`.
///
/// Terms are strictly increasing for `theta > 1`, so this is also the number
/// of distinct `y`-smooth members of `B(x)`.
pub fn count_smooth_in_beatty(params: &BeattyParams, x: f64, y: f64, sieve: &SpfSieve) -> Result<u64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("x must be non-negative, got {x}")));
    }
    if y.is_nan() || y < 1.0 {
        return Err(Error::Domain(format!("y must be at least 1, got {y}")));
    }
    let nmax = lattice_floor(x);
    let top = params.last_value(x)?;
    if top > sieve.limit() {
        return Err(Error::Range(format!(
            "largest term {top} exceeds the sieve limit {}",
            sieve.limit()
        )));
    }
    let yb = lattice_floor(y);
    let mut count = 0u64;
    for n in 1..=nmax {
        let m = params.term(n)?;
        if sieve.smooth_unchecked(m as usize, yb) {
            count += 1;
        }
    }
    Ok(count)
}

impl std::fmt::Display for BeattyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "theta={} psi={}", self.theta, self.psi)
    }
}
