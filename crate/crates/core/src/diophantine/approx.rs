//! Dirichlet approximation and empirical type profiles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cf::PartialQuotients;
use super::quad::{QuadIrr, QuadNum};
use crate::error::{Error, Result};

/// `target = a/q + delta` with `1 <= q <= cap` and `|delta| <= 1/(q cap)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalApprox {
    pub a: BigInt,
    pub q: u64,
    /// Exact `target - a/q`.
    pub delta: QuadNum,
    pub cap: u64,
}

impl RationalApprox {
    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64()
    }

    /// Checks `q <= cap`, `gcd(a, q) = 1` and `|delta| <= 1/(q cap)` exactly.
    pub fn satisfies_contract(&self) -> bool {
        if self.q == 0 || self.q > self.cap {
            return false;
        }
        if !self.a.gcd(&BigInt::from(self.q)).is_one() {
            return false;
        }
        let bound = BigRational::new(BigInt::one(), BigInt::from(self.q) * BigInt::from(self.cap));
        self.delta.abs() <= QuadNum::from_ratio(&bound)
    }
}

/// The last convergent of `target` with denominator at most `cap`.
///
/// Successive convergent denominators satisfy `q_k <= cap < q_{k+1}`, so
/// `|target - p_k/q_k| < 1/(q_k q_{k+1}) <= 1/(q_k cap)`. A rational target
/// whose denominator fits under the cap is returned with `delta = 0`.
pub fn dirichlet_approx(target: &QuadNum, cap: u64) -> Result<RationalApprox> {
    if cap == 0 {
        return Err(Error::Domain("approximation cap must be at least 1".into()));
    }
    let cap_big = BigInt::from(cap);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for a in PartialQuotients::new(target) {
        let p = &a * &p1 + &p0;
        let q = &a * &q1 + &q0;
        if q > cap_big {
            break;
        }
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
    }
    // the zeroth convergent has q = 1 <= cap, so q1 >= 1 here
    let q = q1.to_u64().expect("denominator bounded by cap");
    let delta = target - &QuadNum::from_ratio(&BigRational::new(p1.clone(), q1));
    Ok(RationalApprox {
        a: p1,
        q,
        delta,
        cap,
    })
}

/// One sample of `||m theta||`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSample {
    pub m: u64,
    /// Distance from `m theta` to the nearest integer, in `(0, 1/2]`.
    pub dist: f64,
    /// `log(1 / (m dist)) / log m`.
    pub exponent: f64,
}

/// Empirical approximation exponents of `theta` over `2 <= m <= max_m`.
///
/// With `kappa_sup` the largest recorded exponent,
/// `||m theta|| >= m^-(1 + kappa_sup)` holds on the sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeProfile {
    pub kappa_sup: f64,
    pub samples: Vec<TypeSample>,
}

/// Distance from `v` to the nearest integer, exactly.
pub fn dist_to_nearest_int(v: &QuadNum) -> QuadNum {
    let (_, r) = v.split_floor();
    let one_minus = &QuadNum::from_integer(1) - &r;
    if one_minus < r {
        one_minus
    } else {
        r
    }
}

pub fn type_profile(theta: &QuadIrr, max_m: u64) -> Result<TypeProfile> {
    if max_m < 2 {
        return Err(Error::Domain(format!("max_m must be at least 2, got {max_m}")));
    }
    let mut samples = Vec::with_capacity(max_m as usize - 1);
    let mut kappa_sup = f64::NEG_INFINITY;
    for m in 2..=max_m {
        let dist = dist_to_nearest_int(&theta.value().mul_int(m)).positive_to_f64()?;
        let mf = m as f64;
        let exponent = (1.0 / (mf * dist)).ln() / mf.ln();
        kappa_sup = kappa_sup.max(exponent);
        samples.push(TypeSample { m, dist, exponent });
    }
    Ok(TypeProfile { kappa_sup, samples })
}
