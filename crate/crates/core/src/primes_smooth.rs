//! Smallest-prime-factor sieve, smoothness predicates and exact counting of
//! smooth numbers.
//!
//! An integer `n` is `y`-smooth when its largest prime factor `P(n)` is at
//! most `y`. By convention `P(1) = 1`, so `1` is `y`-smooth for every
//! `y >= 1`. Real bounds are compared on the integer lattice: `n <= x` means
//! `n <= floor(x)` and `P(n) <= y` means `P(n) <= floor(y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest sieve limit supported. Entries are stored as `u32`, so the table
/// costs four bytes per integer (about 400 MB at `10^8`).
pub const MAX_SIEVE_LIMIT: u64 = u32::MAX as u64;

/// Floor of a non-negative real bound on the integer lattice, saturating at
/// `u64::MAX` for `+inf` and very large values.
pub(crate) fn lattice_floor(v: f64) -> u64 {
    if v.is_nan() || v < 0.0 {
        0
    } else if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v.floor() as u64
    }
}

fn check_bound(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::Domain(format!("{name} must be a non-negative number, got {v}")));
    }
    Ok(())
}

/// Smallest-prime-factor table for `2..=limit`, built with a linear sieve.
///
/// The table is immutable after construction and can be shared freely
/// between threads.
#[derive(Clone)]
pub struct SpfSieve {
    limit: u32,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl std::fmt::Debug for SpfSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpfSieve")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl SpfSieve {
    /// Builds the table for every integer up to `limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Size(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Size(format!(
                "sieve limit {limit} exceeds the maximum of {MAX_SIEVE_LIMIT}"
            )));
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(n + 1)
            .map_err(|e| Error::Size(format!("cannot allocate sieve of {limit} entries: {e}")))?;
        spf.resize(n + 1, 0);

        // pi(N) < 1.26 N / ln N for N >= 17
        let est = ((limit as f64) / (limit as f64).ln() * 1.26) as usize + 16;
        let mut primes: Vec<u32> = Vec::new();
        primes
            .try_reserve(est)
            .map_err(|e| Error::Size(format!("cannot allocate prime list: {e}")))?;

        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > n {
                    break;
                }
                spf[ip] = p;
            }
        }
        primes.shrink_to_fit();

        Ok(Self {
            limit: limit as u32,
            spf,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    /// All primes up to the limit, increasing.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// The primes `p <= y`, increasing. `y` may exceed the limit, in which
    /// case all tabulated primes are returned; callers that need exactness
    /// check `y <= limit` themselves.
    pub fn primes_up_to(&self, y: f64) -> &[u32] {
        let yb = lattice_floor(y);
        let end = self.primes.partition_point(|&p| (p as u64) <= yb);
        &self.primes[..end]
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n < 2 || n > self.limit as u64 {
            return Err(Error::Domain(format!(
                "{n} is outside the sieve range 2..={}",
                self.limit
            )));
        }
        Ok(())
    }

    /// `p(n)`, the smallest prime factor of `n`.
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check_index(n)?;
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_index(n)?;
        Ok(self.spf[n as usize] as u64 == n)
    }

    /// `P(n)`, the largest prime factor of `n`, found by stripping smallest
    /// prime factors until one remains.
    pub fn largest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check_index(n)?;
        let mut m = n as usize;
        let mut last = 1u32;
        while m > 1 {
            last = self.spf[m];
            m /= last as usize;
        }
        Ok(last as u64)
    }

    /// Prime factors of `n` with multiplicity, in increasing order. Yields
    /// nothing for `n = 1`.
    pub fn prime_factors(&self, n: u64) -> Result<PrimeFactors<'_>> {
        if n == 0 || n > self.limit as u64 {
            return Err(Error::Domain(format!(
                "{n} is outside the sieve range 1..={}",
                self.limit
            )));
        }
        Ok(PrimeFactors {
            spf: &self.spf,
            rest: n as usize,
        })
    }

    /// Whether `P(n) <= y`.
    pub fn is_smooth(&self, n: u64, y: f64) -> Result<bool> {
        if n == 0 || n > self.limit as u64 {
            return Err(Error::Domain(format!(
                "{n} is outside the sieve range 1..={}",
                self.limit
            )));
        }
        if y < 1.0 || y.is_nan() {
            return Err(Error::Domain(format!("smoothness bound must be >= 1, got {y}")));
        }
        Ok(self.smooth_unchecked(n as usize, lattice_floor(y)))
    }

    #[inline]
    pub(crate) fn smooth_unchecked(&self, n: usize, ybound: u64) -> bool {
        let mut m = n;
        while m > 1 {
            let p = self.spf[m];
            if p as u64 > ybound {
                return false;
            }
            m /= p as usize;
        }
        true
    }

    #[inline]
    pub(crate) fn spf_unchecked(&self, n: usize) -> u32 {
        self.spf[n]
    }

    fn check_x(&self, x: f64) -> Result<u64> {
        check_bound("x", x)?;
        let xb = lattice_floor(x);
        if xb > self.limit as u64 {
            return Err(Error::Range(format!(
                "x = {x} exceeds the sieve limit {}",
                self.limit
            )));
        }
        Ok(xb)
    }

    /// `Psi(x, y)` by a linear scan of the table.
    pub fn psi(&self, x: f64, y: f64) -> Result<SmoothCount> {
        let xb = self.check_x(x)?;
        check_bound("y", y)?;
        let yb = lattice_floor(y);
        let count = if yb == 0 {
            0
        } else if yb >= xb {
            xb
        } else {
            // n is smooth iff spf(n) <= y and n / spf(n) is smooth
            let xb = xb as usize;
            let mut smooth = vec![false; xb + 1];
            smooth[1] = true;
            let mut count = 1u64;
            for n in 2..=xb {
                let p = self.spf[n] as usize;
                if p as u64 <= yb && smooth[n / p] {
                    smooth[n] = true;
                    count += 1;
                }
            }
            count
        };
        Ok(SmoothCount { x, y, count })
    }

    /// The `y`-smooth integers `n <= x` in increasing order.
    pub fn smooth_numbers(&self, x: f64, y: f64) -> Result<SmoothNumbers<'_>> {
        let xb = self.check_x(x)?;
        check_bound("y", y)?;
        Ok(SmoothNumbers {
            sieve: self,
            next: 1,
            end: xb,
            ybound: lattice_floor(y),
        })
    }
}

/// Iterator over prime factors, see [`SpfSieve::prime_factors`].
pub struct PrimeFactors<'a> {
    spf: &'a [u32],
    rest: usize,
}

impl Iterator for PrimeFactors<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.rest <= 1 {
            return None;
        }
        let p = self.spf[self.rest];
        self.rest /= p as usize;
        Some(p as u64)
    }
}

/// Increasing stream of smooth numbers, see [`SpfSieve::smooth_numbers`].
pub struct SmoothNumbers<'a> {
    sieve: &'a SpfSieve,
    next: u64,
    end: u64,
    ybound: u64,
}

impl Iterator for SmoothNumbers<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.ybound == 0 {
            return None;
        }
        while self.next <= self.end {
            let n = self.next;
            self.next += 1;
            if self.sieve.smooth_unchecked(n as usize, self.ybound) {
                return Some(n);
            }
        }
        None
    }
}

/// `Psi(x, y)` together with the bounds it was computed for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothCount {
    pub x: f64,
    pub y: f64,
    pub count: u64,
}

/// `Psi(x, y)` by depth-first enumeration of products of powers of the given
/// primes. `x` is not limited by any table, only by `u64`.
///
/// `primes` must be exactly the primes `<= y` in increasing order.
pub fn psi_dfs(x: f64, y: f64, primes: &[u32]) -> Result<SmoothCount> {
    check_bound("x", x)?;
    check_bound("y", y)?;
    if x < 1.0 {
        return Ok(SmoothCount { x, y, count: 0 });
    }
    if y < 1.0 {
        return Ok(SmoothCount { x, y, count: 0 });
    }
    let yb = lattice_floor(y);
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("prime list must be strictly increasing".into()));
    }
    if let Some(&last) = primes.last() {
        if last as u64 > yb {
            return Err(Error::Domain(format!("prime {last} exceeds y = {y}")));
        }
    }
    if x >= 2f64.powi(63) {
        return Err(Error::Range(format!("x = {x} is too large for exact enumeration")));
    }
    let xb = lattice_floor(x);
    let count = if primes.is_empty() {
        1
    } else {
        dfs_count(xb, primes, primes.len() - 1)
    };
    Ok(SmoothCount { x, y, count })
}

// Counts the products <= limit of primes[..=top] (repetition allowed),
// including the empty product. Primes are tried largest first.
fn dfs_count(limit: u64, primes: &[u32], top: usize) -> u64 {
    let usable = primes[..=top].partition_point(|&p| p as u64 <= limit);
    let mut count = 1u64;
    for i in (0..usable).rev() {
        let p = primes[i] as u64;
        if i == 0 {
            // powers p, p^2, ... <= limit
            count += limit.ilog(p) as u64;
        } else {
            count += dfs_count(limit / p, primes, i);
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_largest_factor(mut n: u64) -> u64 {
        let mut largest = 1;
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                largest = d;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            largest = n;
        }
        largest
    }

    #[test]
    fn spf_table_small() {
        let s = SpfSieve::new(10).unwrap();
        let expected = [(2, 2), (3, 3), (4, 2), (5, 5), (6, 2), (7, 7), (8, 2), (9, 3), (10, 2)];
        for (n, p) in expected {
            assert_eq!(s.smallest_prime_factor(n).unwrap(), p);
        }
        let two = SpfSieve::new(2).unwrap();
        assert_eq!(two.smallest_prime_factor(2).unwrap(), 2);
    }

    #[test]
    fn spf_large_prime() {
        let s = SpfSieve::new(1_000_000).unwrap();
        // trial division
        let n = 999_983u64;
        assert!((2..=1000).all(|d| n % d != 0));
        assert_eq!(s.smallest_prime_factor(n).unwrap(), n);
        assert_eq!(s.primes().len(), 78_498);
    }

    #[test]
    fn sieve_size_errors() {
        assert!(matches!(SpfSieve::new(1), Err(Error::Size(_))));
        assert!(matches!(SpfSieve::new(0), Err(Error::Size(_))));
        assert!(matches!(SpfSieve::new(MAX_SIEVE_LIMIT + 1), Err(Error::Size(_))));
    }

    #[test]
    fn spf_invariants() {
        let s = SpfSieve::new(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = s.smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert_eq!(s.smallest_prime_factor(p).unwrap(), p);
            assert_eq!(p == n, s.is_prime(n).unwrap());
            assert!(s.prime_factors(n).unwrap().all(|q| q >= p));
            assert_eq!(s.largest_prime_factor(n).unwrap(), trial_largest_factor(n));
        }
    }

    #[test]
    fn largest_prime_factor_examples() {
        let s = SpfSieve::new(1 << 20).unwrap();
        assert_eq!(s.largest_prime_factor(360).unwrap(), 5);
        assert_eq!(s.largest_prime_factor(97).unwrap(), 97);
        assert_eq!(s.largest_prime_factor(1 << 20).unwrap(), 2);
        assert!(matches!(s.largest_prime_factor(1), Err(Error::Domain(_))));
        assert!(matches!(s.largest_prime_factor((1 << 20) + 1), Err(Error::Domain(_))));
    }

    #[test]
    fn smoothness_examples() {
        let s = SpfSieve::new(5000).unwrap();
        assert!(s.is_smooth(1, 1.0).unwrap());
        assert!(s.is_smooth(12, 3.0).unwrap());
        assert!(!s.is_smooth(12, 2.0).unwrap());
        assert_eq!(13 * 17 * 19, 4199);
        assert!(s.is_smooth(4199, 19.0).unwrap());
        assert!(!s.is_smooth(4199, 18.9).unwrap());
        assert!(matches!(s.is_smooth(0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(s.is_smooth(5001, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn psi_examples() {
        let s = SpfSieve::new(1000).unwrap();
        // brute force count of 5-smooth n <= 100
        let brute = (1..=100u64).filter(|&n| trial_largest_factor(n) <= 5).count() as u64;
        assert_eq!(brute, 34);
        assert_eq!(s.psi(100.0, 5.0).unwrap().count, 34);
        assert_eq!(s.psi(50.0, 50.0).unwrap().count, 50);
        assert_eq!(s.psi(10.0, 1.0).unwrap().count, 1);
        assert_eq!(s.psi(10.9, 1.5).unwrap().count, 1);
        assert!(matches!(s.psi(1001.0, 5.0), Err(Error::Range(_))));
    }

    #[test]
    fn psi_dfs_examples() {
        let s = SpfSieve::new(1000).unwrap();
        assert_eq!(psi_dfs(100.0, 5.0, s.primes_up_to(5.0)).unwrap().count, 34);
        assert_eq!(psi_dfs(1.0, 2.0, s.primes_up_to(2.0)).unwrap().count, 1);
        assert_eq!(psi_dfs(1000.0, 1.0, &[]).unwrap().count, 1);
        assert!(psi_dfs(10.0, 3.0, &[2, 3, 5]).is_err());
        assert!(psi_dfs(10.0, 5.0, &[3, 2]).is_err());
    }

    // Psi(x, p_k) = sum_{e >= 0} Psi(x / p_k^e, p_{k-1})
    fn psi_by_exponents(x: u64, primes: &[u64]) -> u64 {
        match primes.split_last() {
            None => u64::from(x >= 1),
            Some((&p, rest)) => {
                let mut total = 0;
                let mut pe = 1u64;
                while pe <= x {
                    total += psi_by_exponents(x / pe, rest);
                    match pe.checked_mul(p) {
                        Some(v) => pe = v,
                        None => break,
                    }
                }
                total
            }
        }
    }

    #[test]
    fn psi_dfs_billion_seven_smooth() {
        let expected = psi_by_exponents(1_000_000_000, &[2, 3, 5, 7]);
        assert_eq!(psi_dfs(1e9, 7.0, &[2, 3, 5, 7]).unwrap().count, expected);
    }

    #[test]
    fn enumerate_examples() {
        let s = SpfSieve::new(100).unwrap();
        let v: Vec<u64> = s.smooth_numbers(10.0, 3.0).unwrap().collect();
        assert_eq!(v, vec![1, 2, 3, 4, 6, 8, 9]);
        let all: Vec<u64> = s.smooth_numbers(10.0, 10.0).unwrap().collect();
        assert_eq!(all, (1..=10).collect::<Vec<_>>());
        let v: Vec<u64> = s.smooth_numbers(30.0, 5.0).unwrap().collect();
        let brute: Vec<u64> = (1..=30).filter(|&n| trial_largest_factor(n) <= 5).collect();
        assert_eq!(v, brute);
        assert_eq!(v.len(), 18);
        assert_eq!(&v[v.len() - 3..], &[25, 27, 30]);
    }

    #[test]
    fn boundaries() {
        let s = SpfSieve::new(2000).unwrap();
        for x in [1.0, 2.0, 17.5, 999.0, 2000.0] {
            assert_eq!(s.psi(x, 1.0).unwrap().count, 1);
            assert_eq!(s.psi(x, x).unwrap().count, x.floor() as u64);
            assert_eq!(s.psi(x, 5000.0).unwrap().count, x.floor() as u64);
        }
    }

    #[test]
    fn monotone_grid() {
        let s = SpfSieve::new(3000).unwrap();
        let ys = [1.0, 2.0, 3.0, 7.0, 11.0, 50.0, 100.0, 1000.0];
        for x in (1..=3000).step_by(37) {
            let row: Vec<u64> = ys.iter().map(|&y| s.psi(x as f64, y).unwrap().count).collect();
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
            for &y in &ys {
                let a = s.psi(x as f64, y).unwrap().count;
                let b = s.psi((x + 1).min(3000) as f64, y).unwrap().count;
                assert!(a <= b);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn sieve() -> &'static SpfSieve {
            static S: OnceLock<SpfSieve> = OnceLock::new();
            S.get_or_init(|| SpfSieve::new(50_000).unwrap())
        }

        proptest! {
            #[test]
            fn stream_length_matches_count(x in 1u64..50_000, y in 1u64..2_000) {
                let s = sieve();
                let n = s.smooth_numbers(x as f64, y as f64).unwrap().count() as u64;
                prop_assert_eq!(n, s.psi(x as f64, y as f64).unwrap().count);
            }

            #[test]
            fn dfs_matches_sieve(x in 1u64..50_000, y in 1u64..300) {
                let s = sieve();
                let a = s.psi(x as f64, y as f64).unwrap().count;
                let b = psi_dfs(x as f64, y as f64, s.primes_up_to(y as f64)).unwrap().count;
                prop_assert_eq!(a, b);
            }
        }
    }
}
