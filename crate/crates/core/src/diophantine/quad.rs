use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `floor(b * sqrt(d))` for `d >= 0`.
fn floor_b_sqrt_d(b: &BigInt, d: &BigInt) -> BigInt {
    if b.is_zero() || d.is_zero() {
        return BigInt::zero();
    }
    let v = b * b * d;
    let s = v.sqrt();
    if b.is_positive() {
        s
    } else if &s * &s == v {
        -s
    } else {
        -s - 1
    }
}

/// `floor((a + b*sqrt(d)) / c)` for `c != 0`, `d >= 0`.
pub(crate) fn floor_surd(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt) -> BigInt {
    debug_assert!(!c.is_zero());
    if c.is_negative() {
        let (na, nb, nc) = (-a, -b, -c);
        (na + floor_b_sqrt_d(&nb, d)).div_floor(&nc)
    } else {
        (a + floor_b_sqrt_d(b, d)).div_floor(c)
    }
}

/// Sign of `a + b*sqrt(d)` for `d >= 0`, decided by squaring.
pub(crate) fn sign_surd(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.cmp(&BigInt::zero());
    let sb = if d.is_zero() {
        Ordering::Equal
    } else {
        b.cmp(&BigInt::zero())
    };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor((a + b*sqrt(d)) / c)` in machine integers; `None` on overflow.
/// Requires `c > 0` and `d >= 0`.
#[inline]
pub(crate) fn floor_surd_i128(a: i128, b: i128, d: u128, c: i128) -> Option<i128> {
    debug_assert!(c > 0);
    let t = if b == 0 || d == 0 {
        0
    } else {
        let bb = b.unsigned_abs();
        let v = bb.checked_mul(bb)?.checked_mul(d)?;
        let s = v.isqrt();
        let si = s as i128;
        if b > 0 {
            si
        } else if s * s == v {
            -si
        } else {
            -si - 1
        }
    };
    Some(a.checked_add(t)?.div_euclid(c))
}

/// Sign of `a + b*sqrt(d)` in machine integers; `None` on overflow.
#[inline]
pub(crate) fn sign_surd_i128(a: i128, b: i128, d: u128) -> Option<Ordering> {
    let sa = a.cmp(&0);
    let sb = if d == 0 { Ordering::Equal } else { b.cmp(&0) };
    if sb == Ordering::Equal {
        return Some(sa);
    }
    if sa == Ordering::Equal || sa == sb {
        return Some(sb);
    }
    let aa = a.unsigned_abs().checked_mul(a.unsigned_abs())?;
    let bb = b.unsigned_abs();
    let bbd = bb.checked_mul(bb)?.checked_mul(d)?;
    Some(match aa.cmp(&bbd) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    })
}

/// An exact element `(a + b*sqrt(d)) / c` of a real quadratic field.
///
/// Rationals are the case `b = 0` and are stored with `d = 1`. Values are
/// kept normalized: `c > 0`, `gcd(a, b, c) = 1`, and a perfect-square `d` is
/// folded into the rational part, so `b != 0` implies the value is
/// irrational.
///
/// Arithmetic between two irrational values requires the same `d`; mixing
/// fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

impl QuadNum {
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("denominator c must be nonzero".into()));
        }
        if d.is_negative() {
            return Err(Error::Domain(format!("radicand d = {d} must be non-negative")));
        }
        Ok(Self::normalized(a, b, d, c))
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut d: BigInt, mut c: BigInt) -> Self {
        if !b.is_zero() {
            let s = d.sqrt();
            if &s * &s == d {
                a += &b * &s;
                b = BigInt::zero();
            }
        }
        if b.is_zero() {
            d = BigInt::one();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, d, c }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            a: n.into(),
            b: BigInt::zero(),
            d: BigInt::one(),
            c: BigInt::one(),
        }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::normalized(
            r.numer().clone(),
            BigInt::zero(),
            BigInt::one(),
            r.denom().clone(),
        )
    }

    /// Exact value of a finite `f64` (a dyadic rational).
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(|r| Self::from_ratio(&r))
            .ok_or_else(|| Error::Domain(format!("{v} is not a finite number")))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The rational value, if `b = 0`.
    pub fn to_ratio(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn signum(&self) -> Ordering {
        sign_surd(&self.a, &self.b, &self.d)
    }

    pub fn floor(&self) -> BigInt {
        floor_surd(&self.a, &self.b, &self.d, &self.c)
    }

    /// `(floor, fractional part)`, with `0 <= frac < 1`.
    pub fn split_floor(&self) -> (BigInt, QuadNum) {
        let k = self.floor();
        let r = Self::normalized(
            &self.a - &k * &self.c,
            self.b.clone(),
            self.d.clone(),
            self.c.clone(),
        );
        (k, r)
    }

    pub fn abs(&self) -> QuadNum {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// `1 / self`; fails for zero.
    pub fn recip(&self) -> Result<QuadNum> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        // c / (a + b√d) = c (a - b√d) / (a² - b² d)
        let den = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::normalized(
            &self.c * &self.a,
            -(&self.c * &self.b),
            self.d.clone(),
            den,
        ))
    }

    pub fn mul_ratio(&self, r: &BigRational) -> QuadNum {
        Self::normalized(
            &self.a * r.numer(),
            &self.b * r.numer(),
            self.d.clone(),
            &self.c * r.denom(),
        )
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> QuadNum {
        let n = n.into();
        Self::normalized(&self.a * &n, &self.b * &n, self.d.clone(), self.c.clone())
    }

    pub fn add_ratio(&self, r: &BigRational) -> QuadNum {
        Self::normalized(
            &self.a * r.denom() + r.numer() * &self.c,
            &self.b * r.denom(),
            self.d.clone(),
            &self.c * r.denom(),
        )
    }

    fn common_d(&self, other: &QuadNum) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(
                    self.d, other.d,
                    "arithmetic across different quadratic fields"
                );
                self.d.clone()
            }
        }
    }

    /// Approximate value; see [`QuadNum::enclose`] for rigorous bounds.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.to_ratio() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        self.enclose(128).midpoint_f64()
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
            c: self.c.clone(),
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, o: &QuadNum) -> QuadNum {
        let d = self.common_d(o);
        QuadNum::normalized(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            d,
            &self.c * &o.c,
        )
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, o: &QuadNum) -> QuadNum {
        self + &(-o)
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, o: &QuadNum) -> QuadNum {
        let d = self.common_d(o);
        QuadNum::normalized(
            &self.a * &o.a + &self.b * &o.b * &d,
            &self.a * &o.b + &self.b * &o.a,
            d,
            &self.c * &o.c,
        )
    }
}

impl Div for &QuadNum {
    type Output = QuadNum;
    /// Panics on division by zero.
    fn div(self, o: &QuadNum) -> QuadNum {
        self * &o.recip().expect("division by zero")
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            match terminating_decimal(&self.a, &self.c) {
                Some(s) => write!(f, "dec:{s}"),
                None => write!(f, "{}/{}", self.a, self.c),
            }
        } else {
            write!(f, "quad:{},{},{},{}", self.a, self.b, self.d, self.c)
        }
    }
}

fn terminating_decimal(num: &BigInt, den: &BigInt) -> Option<String> {
    let mut rest = den.clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut e2, mut e5) = (0u32, 0u32);
    while rest.is_even() {
        rest /= &two;
        e2 += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        e5 += 1;
    }
    if !rest.is_one() {
        return None;
    }
    let scale = e2.max(e5);
    let scaled = num * (BigInt::from(10).pow(scale) / den);
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let s = if scale == 0 {
        digits
    } else {
        let digits = format!("{:0>width$}", digits, width = scale as usize + 1);
        let (int, frac) = digits.split_at(digits.len() - scale as usize);
        format!("{int}.{frac}")
    };
    Some(if neg { format!("-{s}") } else { s })
}

/// A validated irrational `(a + b*sqrt(d)) / c` with `b != 0` and `d` not a
/// perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr(QuadNum);

impl QuadIrr {
    pub fn new(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        Self::from_big(a.into(), b.into(), d.into(), c.into())
    }

    pub fn from_big(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Domain("b = 0 does not give an irrational number".into()));
        }
        if !d.is_positive() {
            return Err(Error::Domain(format!("radicand d = {d} must be positive")));
        }
        let s = d.sqrt();
        if &s * &s == d {
            return Err(Error::Domain(format!("radicand d = {d} is a perfect square")));
        }
        QuadNum::new(a, b, d, c).map(Self)
    }

    /// `(1 + sqrt 5) / 2`.
    pub fn golden_ratio() -> Self {
        Self::new(1, 1, 5, 2).unwrap()
    }

    pub fn value(&self) -> &QuadNum {
        &self.0
    }

    pub fn into_value(self) -> QuadNum {
        self.0
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor()
    }

    /// `(floor, fractional part)`; the fractional part lies strictly in
    /// `(0, 1)`.
    pub fn frac_part(&self) -> (BigInt, QuadIrr) {
        let (k, r) = self.0.split_floor();
        (k, QuadIrr(r))
    }

    /// The reciprocal, in the same field.
    pub fn recip(&self) -> QuadIrr {
        QuadIrr(self.0.recip().expect("irrational values are nonzero"))
    }

    /// Whether the value exceeds 1, decided exactly.
    pub fn exceeds_one(&self) -> bool {
        self.0 > QuadNum::from_integer(1)
    }
}

impl TryFrom<QuadNum> for QuadIrr {
    type Error = Error;
    fn try_from(v: QuadNum) -> Result<Self> {
        if v.is_rational() {
            Err(Error::Domain(format!("{v} is rational")))
        } else {
            Ok(QuadIrr(v))
        }
    }
}

impl From<QuadIrr> for QuadNum {
    fn from(v: QuadIrr) -> QuadNum {
        v.0
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact `floor(n * t + psi)`.
pub fn quad_floor(t: &QuadNum, n: u64, psi: &BigRational) -> BigInt {
    // (s a n + c r + s b n sqrt d) / (c s)
    let (r, s) = (psi.numer(), psi.denom());
    let small = (|| {
        let a = t.a.to_i128()?;
        let b = t.b.to_i128()?;
        let c = t.c.to_i128()?;
        let d = t.d.to_u128()?;
        let r = r.to_i128()?;
        let s = s.to_i128()?;
        let n = n as i128;
        let num_a = s.checked_mul(a)?.checked_mul(n)?.checked_add(c.checked_mul(r)?)?;
        let num_b = s.checked_mul(b)?.checked_mul(n)?;
        let den = c.checked_mul(s)?;
        floor_surd_i128(num_a, num_b, d, den)
    })();
    if let Some(k) = small {
        return BigInt::from(k);
    }
    let n = BigInt::from(n);
    floor_surd(
        &(s * &t.a * &n + &t.c * r),
        &(s * &t.b * &n),
        &t.d,
        &(&t.c * s),
    )
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("{what}: `{s}` is not an integer")))
}

/// Parses a decimal literal `[-]digits[.digits]` or a fraction `p/q` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_int(p, "numerator")?;
        let q = parse_int(q, "denominator")?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !ok(int) || !ok(frac) {
        return Err(Error::Parse(format!("`{s}` is not a decimal literal")));
    }
    let digits = format!("{int}{frac}");
    let mut num: BigInt = digits.parse().unwrap_or_default();
    if neg {
        num = -num;
    }
    let den = BigInt::from(10).pow(frac.len() as u32);
    Ok(BigRational::new(num, den))
}

/// Grammar accepted by [`parse_real`].
pub const REAL_GRAMMAR: &str =
    "quad:a,b,d,c  for (a + b*sqrt(d))/c with integers b != 0, d > 0 not a square, c != 0\n\
     dec:<digits>  for a decimal literal such as dec:1.4142135623730951 or dec:-3";

/// Parses `quad:a,b,d,c` or `dec:<digits>`.
pub fn parse_real(s: &str) -> Result<QuadNum> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("quad:") {
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "`{s}` needs four comma-separated integers\n{REAL_GRAMMAR}"
            )));
        }
        let a = parse_int(parts[0], "a")?;
        let b = parse_int(parts[1], "b")?;
        let d = parse_int(parts[2], "d")?;
        let c = parse_int(parts[3], "c")?;
        return QuadIrr::from_big(a, b, d, c)
            .map(QuadNum::from)
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    }
    if let Some(body) = s.strip_prefix("dec:") {
        if body.contains('/') {
            return Err(Error::Parse(format!("`{s}` is not a decimal literal\n{REAL_GRAMMAR}")));
        }
        return parse_rational(body)
            .map(|r| QuadNum::from_ratio(&r))
            .map_err(|e| Error::Parse(format!("{e}\n{REAL_GRAMMAR}")));
    }
    Err(Error::Parse(format!("`{s}` has no recognised prefix\n{REAL_GRAMMAR}")))
}
