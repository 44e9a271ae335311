//! Rigorous fixed-point enclosures of quadratic irrationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::quad::QuadNum;
use crate::error::{Error, Result};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 128;
/// Largest precision tried before reporting an undecidable comparison.
pub const MAX_DIGITS: u32 = 1024;

pub fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) < 3.3219281
    (digits as u64 * 33_219_281 / 10_000_000) as u32 + 1
}

/// `lo / 2^bits <= v <= hi / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Enclosure {
    fn scale(&self) -> BigInt {
        BigInt::from(1) << self.bits
    }

    pub fn lower_f64(&self) -> f64 {
        BigRational::new(self.lo.clone(), self.scale())
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn upper_f64(&self) -> f64 {
        BigRational::new(self.hi.clone(), self.scale())
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn midpoint_f64(&self) -> f64 {
        BigRational::new(&self.lo + &self.hi, self.scale() << 1)
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Whether the enclosure proves the value strictly positive.
    pub fn is_certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

impl QuadNum {
    /// An enclosure of the value with denominator `2^bits`, whose width is at
    /// most `|b| / c + 2` units of `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Enclosure {
        let (a, b, d, c) = (self.a(), self.b(), self.d(), self.c());
        let base = a << bits;
        let (num_lo, num_hi) = if b.is_zero() {
            (base.clone(), base)
        } else {
            let s = (d << (2 * bits)).sqrt();
            let s1 = &s + 1;
            if b.is_positive() {
                (&base + b * &s, &base + b * &s1)
            } else {
                (&base + b * &s1, &base + b * &s)
            }
        };
        Enclosure {
            lo: num_lo.div_floor(c),
            hi: -((-num_hi).div_floor(c)),
            bits,
        }
    }

    /// Enclosure at `digits` decimal digits.
    pub fn enclose_digits(&self, digits: u32) -> Enclosure {
        self.enclose(digits_to_bits(digits))
    }

    /// `floor(frac(self) * 2^128)`, accurate to a few units in the last place.
    pub fn frac_fixed128(&self) -> u128 {
        let e = self.enclose(192);
        let modulus = BigInt::from(1) << 192;
        let r: BigInt = e.lo.mod_floor(&modulus) >> 64;
        r.to_u128().unwrap_or(0)
    }

    /// A positive value converted to `f64` with a proof that it is nonzero,
    /// raising the precision from [`DEFAULT_DIGITS`] up to [`MAX_DIGITS`].
    pub fn positive_to_f64(&self) -> Result<f64> {
        let mut digits = DEFAULT_DIGITS;
        loop {
            let e = self.enclose_digits(digits);
            if e.is_certainly_positive() {
                return Ok(e.midpoint_f64());
            }
            if digits >= MAX_DIGITS {
                return Err(Error::Precision(format!(
                    "cannot separate {self} from 0 at {MAX_DIGITS} digits"
                )));
            }
            digits *= 2;
        }
    }
}
