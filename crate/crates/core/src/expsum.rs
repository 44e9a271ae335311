//! Exponential sums over smooth numbers, the bound they are compared
//! against, and the Erdős–Turán inequality.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::diophantine::{parse_rational, QuadNum};
use crate::error::{Error, Result};
use crate::primes_smooth::{lattice_floor, SpfSieve};
use crate::saddle::{bound_scales, SaddleAlpha};

/// Slack allowed on `|f(p)| <= 1` for values produced by `cos`/`sin`.
const MODULUS_SLACK: f64 = 1e-12;

/// Smooth numbers are summed in blocks of this many consecutive integers;
/// block sums are combined in index order, so results do not depend on the
/// thread count.
const BLOCK: u64 = 1 << 16;

/// `frac(theta)` as a 128-bit binary fraction.
///
/// `n theta mod 1` is then `n * frac(theta) mod 2^128`, exact up to the
/// initial truncation, which contributes less than `n * 2^-128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase(u128);

impl Phase {
    pub fn of(theta: &QuadNum) -> Self {
        Phase(theta.frac_fixed128())
    }

    pub fn zero() -> Self {
        Phase(0)
    }

    pub fn fixed(self) -> u128 {
        self.0
    }

    /// `n theta mod 1` in fixed point.
    #[inline]
    pub fn at_fixed(self, n: u64) -> u128 {
        self.0.wrapping_mul(n as u128)
    }

    /// `n theta mod 1` in `[0, 1)`.
    #[inline]
    pub fn at(self, n: u64) -> f64 {
        fixed_to_unit(self.at_fixed(n))
    }
}

/// A 128-bit binary fraction as a real in `[0, 1)`.
#[inline]
pub fn fixed_to_unit(v: u128) -> f64 {
    ((v >> 64) as u64 as f64) * (1.0 / 18_446_744_073_709_551_616.0)
}

/// `e(t) = exp(2 pi i t)`.
#[inline]
pub fn e(t: f64) -> Complex64 {
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// A completely multiplicative function given by its values at primes
/// (default 1), with `|f(p)| <= 1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultFn {
    values: BTreeMap<u64, Complex64>,
}

impl MultFn {
    /// `f = 1`.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: u64, v: Complex64) -> Result<()> {
        if !v.re.is_finite() || !v.im.is_finite() || v.norm() > 1.0 + MODULUS_SLACK {
            return Err(Error::Domain(format!("|f({p})| = {} exceeds 1", v.norm())));
        }
        if p < 2 {
            return Err(Error::Domain(format!("f is specified at primes, got {p}")));
        }
        self.values.insert(p, v);
        Ok(())
    }

    pub fn with(mut self, p: u64, v: Complex64) -> Result<Self> {
        self.set(p, v)?;
        Ok(self)
    }

    pub fn at_prime(&self, p: u64) -> Complex64 {
        self.values.get(&p).copied().unwrap_or(Complex64::new(1.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        self.values.values().all(|v| *v == Complex64::new(1.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.values.values().all(|v| v.im == 0.0)
    }

    /// `f(n)` from the factorization of `n`; `f(1) = 1`.
    pub fn eval(&self, sieve: &SpfSieve, n: u64) -> Result<Complex64> {
        Ok(sieve
            .prime_factors(n)?
            .fold(Complex64::new(1.0, 0.0), |acc, p| acc * self.at_prime(p)))
    }

    fn check_primes(&self, sieve: &SpfSieve) -> Result<()> {
        for &p in self.values.keys() {
            if p <= sieve.limit() && !sieve.is_prime(p)? {
                return Err(Error::Domain(format!("f is specified at primes, {p} is composite")));
            }
        }
        Ok(())
    }
}

/// Parses `p=v,p=v,...` where each `v` is `re`, `re+imi`, `re-imi`, or
/// `e(t)` for `t` a decimal or fraction (the unit-modulus value
/// `exp(2 pi i t)`).
impl FromStr for MultFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut f = MultFn::one();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (p, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("`{item}` is not of the form p=v")))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{p}` is not a prime index")))?;
            f.set(p, parse_complex(v.trim())?)?;
        }
        Ok(f)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    if let Some(t) = s.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
        let t: f64 = num_traits::ToPrimitive::to_f64(&parse_rational(t)?).unwrap_or(f64::NAN);
        return Ok(e(t));
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        return match split {
            Some(k) => {
                let im = &body[k..];
                let im = if im == "+" || im == "-" { format!("{im}1") } else { im.to_string() };
                Ok(Complex64::new(parse_f64(&body[..k])?, parse_f64(&im)?))
            }
            None => {
                let im = match body {
                    "" | "+" => "1",
                    "-" => "-1",
                    b => b,
                };
                Ok(Complex64::new(0.0, parse_f64(im)?))
            }
        };
    }
    Ok(Complex64::new(parse_f64(s)?, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpSumResult {
    pub re: f64,
    pub im: f64,
    /// Number of summands, `Psi(x, y)`.
    pub terms: u64,
    pub x: f64,
    pub y: f64,
    pub theta: String,
}

impl ExpSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

fn block_sum(sieve: &SpfSieve, lo: u64, hi: u64, yb: u64, phase: Phase, f: &MultFn, trivial: bool) -> (Complex64, u64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0;
    for n in lo..=hi {
        if !sieve.smooth_unchecked(n as usize, yb) {
            continue;
        }
        count += 1;
        let term = e(phase.at(n));
        acc += if trivial {
            term
        } else {
            let mut fv = Complex64::new(1.0, 0.0);
            let mut m = n as usize;
            while m > 1 {
                let p = sieve.spf_unchecked(m);
                fv *= f.at_prime(p as u64);
                m /= p as usize;
            }
            fv * term
        };
    }
    (acc, count)
}

fn sum_blocks(sieve: &SpfSieve, xb: u64, yb: u64, phase: Phase, f: &MultFn) -> (Complex64, u64) {
    let trivial = f.is_one();
    let nblocks = xb.div_ceil(BLOCK);
    let run = |b: u64| {
        let lo = b * BLOCK + 1;
        let hi = ((b + 1) * BLOCK).min(xb);
        block_sum(sieve, lo, hi, yb, phase, f, trivial)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(Complex64, u64)> = {
        use rayon::prelude::*;
        (0..nblocks).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(Complex64, u64)> = (0..nblocks).map(run).collect();
    parts
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0), |(s, c), (ps, pc)| (s + ps, c + pc))
}

/// `S(f, theta) = sum_{n <= x, P(n) <= y} f(n) e(n theta)`.
pub fn exp_sum(sieve: &SpfSieve, x: f64, y: f64, theta: &QuadNum, f: &MultFn) -> Result<ExpSumResult> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("x must be non-negative, got {x}")));
    }
    if y.is_nan() || y < 1.0 {
        return Err(Error::Domain(format!("y must be at least 1, got {y}")));
    }
    let xb = lattice_floor(x);
    if xb > sieve.limit() {
        return Err(Error::Range(format!("x = {x} exceeds the sieve limit {}", sieve.limit())));
    }
    f.check_primes(sieve)?;
    let (value, terms) = sum_blocks(sieve, xb, lattice_floor(y), Phase::of(theta), f);
    Ok(ExpSumResult {
        re: value.re,
        im: value.im,
        terms,
        x,
        y,
        theta: theta.to_string(),
    })
}

/// `sum_{m <= theta x, P(m) <= y} e(j m / theta)`, the sum controlling the
/// discrepancy of `(m + 1 - psi)/theta` over smooth `m`.
pub fn smooth_discrepancy_sum(sieve: &SpfSieve, x: f64, y: f64, theta: &QuadNum, j: u64) -> Result<ExpSumResult> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("x must be non-negative, got {x}")));
    }
    let tx = theta.mul_ratio(&BigRational::from_float(x).expect("finite x")).floor();
    let tx: f64 = num_traits::ToPrimitive::to_f64(&tx).unwrap_or(f64::INFINITY).max(0.0);
    let freq = theta.recip()?.mul_int(j);
    exp_sum(sieve, tx, y, &freq, &MultFn::one())
}

/// The two terms of the exponential-sum bound, with no implied constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub u: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// `Psi(x,y) (q (1 + |delta x|))^{-1/2 + 3/2 (1 - alpha)} M`.
    pub term_main: f64,
    /// `Psi(x,y) x^{-alpha/2} (q L y^3)^{1/2} (log y log q)^{1/2}`.
    pub term_tail: f64,
    pub rhs_total: f64,
    pub observed: f64,
    pub ratio: f64,
}

/// Evaluates the bound for `|S(f, a/q + delta)|` at `(x, y)`.
///
/// The tail term carries `x^{-alpha/2}`: it comes from
/// `sqrt(Psi(x/2^j qLy, y) Psi(2^{j+1} qLy, y)) << Psi(x, y) x^{-alpha/2}`,
/// so it is small exactly when `q L y^3` is small against `x^alpha`.
pub fn theorem2_rhs(
    x: f64,
    y: f64,
    q: u64,
    delta: f64,
    psi_xy: u64,
    alpha: &SaddleAlpha,
    observed: f64,
) -> Result<BoundReport> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2 (log q > 0), got {q}")));
    }
    if !(y >= 2.0) || !(x >= y) {
        return Err(Error::Domain(format!("need x >= y >= 2, got x = {x}, y = {y}")));
    }
    let scales = bound_scales(x, y, q, delta)?;
    let a = alpha.alpha;
    let psi = psi_xy as f64;
    let qf = q as f64;
    let exponent = -0.5 + 1.5 * (1.0 - a);
    let term_main = psi * (qf * (1.0 + (delta * x).abs())).powf(exponent) * scales.m;
    let term_tail = psi * x.powf(-a / 2.0) * (qf * scales.l * y.powi(3)).sqrt() * (y.ln() * qf.ln()).sqrt();
    let rhs_total = term_main + term_tail;
    Ok(BoundReport {
        alpha: a,
        u: scales.u,
        l: scales.l,
        m: scales.m,
        term_main,
        term_tail,
        rhs_total,
        observed,
        ratio: observed / rhs_total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErdosTuranReport {
    /// `| #{n : u_n in [rho, sigma] mod 1} - (sigma - rho) N |`.
    pub lhs: f64,
    /// `N/(J+1) + 3 sum_{j <= J} (1/j) |sum_n e(j u_n)|`.
    pub rhs: f64,
    pub count: u64,
    pub n: u64,
}

/// Both sides of the Erdős–Turán inequality for `u_1, ..., u_N`.
pub fn erdos_turan(u: &[f64], big_j: u32, rho: f64, sigma: f64) -> Result<ErdosTuranReport> {
    if u.is_empty() || big_j == 0 {
        return Err(Error::Domain("need N >= 1 and J >= 1".into()));
    }
    if !(rho <= sigma && sigma <= rho + 1.0) {
        return Err(Error::Domain(format!(
            "need rho <= sigma <= rho + 1, got [{rho}, {sigma}]"
        )));
    }
    let fr: Vec<f64> = u.iter().map(|v| v.rem_euclid(1.0)).collect();
    let width = sigma - rho;
    let count = if width >= 1.0 {
        u.len() as u64
    } else {
        fr.iter()
            .filter(|&&v| (v - rho).rem_euclid(1.0) <= width)
            .count() as u64
    };
    let n = u.len() as f64;
    let lhs = (count as f64 - width * n).abs();
    let mut rhs = n / (big_j as f64 + 1.0);
    for j in 1..=big_j {
        let s: Complex64 = fr.iter().map(|&v| e((j as f64 * v).fract())).sum();
        rhs += 3.0 / j as f64 * s.norm();
    }
    Ok(ErdosTuranReport {
        lhs,
        rhs,
        count,
        n: u.len() as u64,
    })
}
