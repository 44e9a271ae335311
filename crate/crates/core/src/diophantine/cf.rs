//! Continued fractions of quadratic irrationals and rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::quad::{floor_surd, QuadNum};

/// Where the expansion starts repeating: quotients `start..start + len`
/// form the period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Period {
    pub start: usize,
    pub len: usize,
}

enum State {
    // (p + sqrt(dd)) / q with q | dd - p^2
    Surd { p: BigInt, q: BigInt, dd: BigInt },
    Ratio { num: BigInt, den: BigInt },
    Done,
}

/// Lazy stream of partial quotients.
pub struct PartialQuotients {
    state: State,
    index: usize,
    seen: HashMap<(BigInt, BigInt), usize>,
    period: Option<Period>,
}

impl PartialQuotients {
    pub fn new(t: &QuadNum) -> Self {
        let state = if t.is_rational() {
            State::Ratio {
                num: t.a().clone(),
                den: t.c().clone(),
            }
        } else {
            let dd = t.b() * t.b() * t.d();
            let (mut p, mut q) = if t.b().is_positive() {
                (t.a().clone(), t.c().clone())
            } else {
                (-t.a(), -t.c())
            };
            let mut dd = dd;
            if !(&dd - &p * &p).is_multiple_of(&q) {
                let qa = q.abs();
                p *= &qa;
                dd *= &q * &q;
                q *= &qa;
            }
            State::Surd { p, q, dd }
        };
        Self {
            state,
            index: 0,
            seen: HashMap::new(),
            period: None,
        }
    }

    /// The period, once the expansion has been followed far enough to see
    /// a repeated state.
    pub fn period(&self) -> Option<Period> {
        self.period
    }
}

impl Iterator for PartialQuotients {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        match &mut self.state {
            State::Done => None,
            State::Ratio { num, den } => {
                let (a, r) = num.div_mod_floor(den);
                if r.is_zero() {
                    self.state = State::Done;
                } else {
                    *num = std::mem::replace(den, r);
                }
                self.index += 1;
                Some(a)
            }
            State::Surd { p, q, dd } => {
                if self.period.is_none() {
                    if let Some(&start) = self.seen.get(&(p.clone(), q.clone())) {
                        self.period = Some(Period {
                            start,
                            len: self.index - start,
                        });
                    } else {
                        self.seen.insert((p.clone(), q.clone()), self.index);
                    }
                }
                let a = floor_surd(p, &BigInt::one(), dd, q);
                let p_next = &a * &*q - &*p;
                let q_next = (&*dd - &p_next * &p_next) / &*q;
                *p = p_next;
                *q = q_next;
                self.index += 1;
                Some(a)
            }
        }
    }
}

/// The first `k` partial quotients (fewer for a rational that terminates).
pub fn cf_expand(t: &QuadNum, k: usize) -> Vec<BigInt> {
    PartialQuotients::new(t).take(k).collect()
}

/// First `k` partial quotients together with the detected period, if any.
pub fn cf_expand_with_period(t: &QuadNum, k: usize) -> (Vec<BigInt>, Option<Period>) {
    let mut it = PartialQuotients::new(t);
    let v: Vec<BigInt> = it.by_ref().take(k).collect();
    (v, it.period())
}

/// Convergents `p_k / q_k` of a quotient list.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p.clone());
            q0 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect()
}
