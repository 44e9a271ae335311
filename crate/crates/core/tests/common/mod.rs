//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's arithmetic.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn eratosthenes(n: usize) -> Vec<u64> {
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Whether every prime factor of `n` is at most `y`, by trial division.
pub fn trial_smooth(mut n: u64, y: u64, primes: &[u64]) -> bool {
    if n <= 1 {
        return true;
    }
    for &p in primes {
        if p > y {
            break;
        }
        if p * p > n {
            return n <= y;
        }
        while n % p == 0 {
            n /= p;
        }
        if n == 1 {
            return true;
        }
    }
    n <= y
}

/// `floor(((a + b sqrt d)/c) n + p/r)` with `b, c, r > 0`, via integer
/// square roots: `floor((r a n + p c + sqrt(r^2 b^2 d n^2)) / (c r))`.
pub struct SurdBeatty {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub c: i64,
    pub p: i64,
    pub r: i64,
}

impl SurdBeatty {
    pub fn term(&self, n: u64) -> u64 {
        let n = BigInt::from(n);
        let rad = BigInt::from(self.r * self.r * self.b * self.b * self.d) * &n * &n;
        let num = BigInt::from(self.r * self.a) * &n + BigInt::from(self.p * self.c) + rad.sqrt();
        num.div_floor(&BigInt::from(self.c * self.r)).to_u64().unwrap()
    }

    pub fn theta(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }
}

/// `alpha` with `sum_{p <= y} log p / (p^alpha - 1) = log x`, by plain
/// bisection on `(0, 4]`.
pub fn bisect_alpha(x: f64, primes: &[u64]) -> f64 {
    let f = |a: f64| primes.iter().map(|&p| (p as f64).ln() / ((p as f64).powf(a) - 1.0)).sum::<f64>() - x.ln();
    let (mut lo, mut hi) = (1e-9, 4.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `frac(n (a + b sqrt d)/c)` to `bits` binary digits, `b > 0`, `c > 0`.
pub fn frac_reference(a: i64, b: i64, d: i64, c: i64, n: u64, bits: u32) -> f64 {
    let n = BigInt::from(n);
    let scale = BigInt::from(1) << bits;
    let rad = BigInt::from(b * b * d) * &n * &n * &scale * &scale;
    let num = BigInt::from(a) * &n * &scale + rad.sqrt();
    let v = num.div_floor(&(BigInt::from(c)));
    let r = v.mod_floor(&scale);
    // keep 64 leading bits
    let top: BigInt = r >> (bits - 64);
    top.to_u64().unwrap() as f64 / 2f64.powi(64)
}

/// Sign of `u + v sqrt d` for `d > 0`.
pub fn sign_surd(u: &BigInt, v: &BigInt, d: &BigInt) -> i32 {
    let su = u.signum().to_i32().unwrap();
    let sv = v.signum().to_i32().unwrap();
    if sv == 0 {
        return su;
    }
    if su == 0 || su == sv {
        return sv;
    }
    // opposite signs: compare u^2 with v^2 d
    let lhs = u * u;
    let rhs = v * v * d;
    if lhs == rhs {
        0
    } else if lhs > rhs {
        su
    } else {
        sv
    }
}
