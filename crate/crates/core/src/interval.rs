//! Outward-rounded enclosures of natural logarithms and a small rational
//! interval type for certified comparisons.
//!
//! `ln n` is reduced to `k ln 2 + 2 atanh(y)` with `y = (n - 2^k)/(n + 2^k)`
//! in `[0, 1/3)`, and both atanh series are summed in fixed point where every
//! truncation rounds toward zero. The lower endpoint is the truncated sum
//! itself; the upper endpoint adds the accumulated truncation error and a
//! geometric tail bound.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Working-precision schedule for certified decisions: start at
/// `start_bits`, double until the question is decided or `max_bits` is hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u64,
    pub max_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            start_bits: 128,
            max_bits: 1 << 23,
        }
    }
}

impl Precision {
    /// Runs `decide` at increasing precision until it returns `Some`.
    pub fn certify<T>(&self, what: &'static str, mut decide: impl FnMut(u64) -> Option<T>) -> Result<T> {
        let mut bits = self.start_bits.max(8).min(self.max_bits);
        loop {
            if let Some(v) = decide(bits) {
                return Ok(v);
            }
            if bits >= self.max_bits {
                return Err(Error::PrecisionExhausted {
                    what,
                    max_bits: self.max_bits,
                });
            }
            bits = (bits * 2).min(self.max_bits);
        }
    }
}

/// Closed interval with exact rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_big(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn shift(&self, v: &BigRational) -> Self {
        Self::new(&self.lo + v, &self.hi + v)
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, v: &BigRational) -> Self {
        let a = &self.lo * v;
        let b = &self.hi * v;
        if v.is_negative() {
            Self::new(b, a)
        } else {
            Self::new(a, b)
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    /// Division by an interval that excludes zero; `None` if it does not.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.lo.is_positive() || other.hi.is_negative() {
            let inv = Self::new(other.hi.recip(), other.lo.recip());
            Some(self.mul(&inv))
        } else {
            None
        }
    }

    /// `|x|` enclosure.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Self::new(-&self.hi, -&self.lo)
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Self::new(BigRational::zero(), m)
        }
    }

    /// Certified `x < v` for every x in the interval: `Some(true)` when the
    /// whole interval is below `v`, `Some(false)` when it is at or above,
    /// `None` when `v` straddles it.
    pub fn lt(&self, v: &BigRational) -> Option<bool> {
        if &self.hi < v {
            Some(true)
        } else if &self.lo >= v {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `x > v`.
    pub fn gt(&self, v: &BigRational) -> Option<bool> {
        if &self.lo > v {
            Some(true)
        } else if &self.hi <= v {
            Some(false)
        } else {
            None
        }
    }

    /// Floor shared by both endpoints, if any.
    pub fn common_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        let b = self.hi.floor().to_integer();
        (a == b).then_some(a)
    }
}

/// Fixed-point enclosure `[lo, hi] / 2^scale` of `atanh(num/den)`, for
/// `0 <= num/den <= 1/3`.
fn atanh_fixed(num: &BigUint, den: &BigUint, scale: u64) -> (BigInt, BigInt) {
    debug_assert!(BigUint::from(3u32) * num <= *den);
    if num.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let num2 = num * num;
    let den2 = den * den;
    let mut pow: BigUint = (num << scale) / den;
    let mut sum = BigUint::zero();
    let mut j: u64 = 0;
    while !pow.is_zero() {
        sum += &pow / (2 * j + 1);
        j += 1;
        pow = &pow * &num2 / &den2;
    }
    // Each summed term is short by < 2 ulps; the tail is below j + 1 ulps.
    let slack = BigUint::from(3 * j + 2);
    let hi = &sum + slack;
    (BigInt::from(sum), BigInt::from(hi))
}

/// Enclosure of `ln n` of width roughly `2^-bits`. `n >= 1`.
pub fn ln_enclosure(n: &BigUint, bits: u64) -> RatInterval {
    assert!(!n.is_zero(), "ln of zero");
    if n.is_one() {
        return RatInterval::point(BigRational::zero());
    }
    let k = n.bits() - 1;
    let guard = 32 + 64 - k.leading_zeros() as u64 + 64 - bits.leading_zeros() as u64;
    let scale = bits + guard;
    let pk = BigUint::one() << k;
    let (l2_lo, l2_hi) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), scale);
    let (y_lo, y_hi) = atanh_fixed(&(n - &pk), &(n + &pk), scale);
    let kk = BigInt::from(k);
    let lo = (&kk * l2_lo + y_lo) * 2;
    let hi = (&kk * l2_hi + y_hi) * 2;
    let den = BigInt::one() << scale;
    RatInterval::new(
        BigRational::new(lo, den.clone()),
        BigRational::new(hi, den),
    )
}

/// Enclosure of `ln c / ln b` for `b >= 2`, `c >= 1`.
pub fn log_ratio_enclosure(c: &BigUint, b: &BigUint, bits: u64) -> RatInterval {
    let lc = ln_enclosure(c, bits + 4);
    let lb = ln_enclosure(b, bits + 4);
    lc.div(&lb).expect("ln b > 0 for b >= 2")
}

/// `ceil(x)` for a rational.
pub fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Certified sign of an interval, `None` when it straddles zero.
pub fn sign_of(iv: &RatInterval) -> Option<Ordering> {
    if iv.lo.is_positive() {
        Some(Ordering::Greater)
    } else if iv.hi.is_negative() {
        Some(Ordering::Less)
    } else if iv.lo.is_zero() && iv.hi.is_zero() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn as_f64(x: &BigRational) -> f64 {
        x.to_f64().unwrap()
    }

    #[test]
    fn ln_brackets_float_values() {
        for n in [2u64, 3, 5, 10, 16, 1000, 123_456_789] {
            let iv = ln_enclosure(&BigUint::from(n), 128);
            let f = (n as f64).ln();
            assert!(as_f64(&iv.lo) <= f + 1e-12 && as_f64(&iv.hi) >= f - 1e-12, "n = {n}");
            assert!(iv.width() < rat(1, 1 << 60), "n = {n}");
        }
    }

    #[test]
    fn ln2_known_digits() {
        // ln 2 = 0.693147180559945309417232121458176568...
        let iv = ln_enclosure(&BigUint::from(2u32), 200);
        let lower = BigRational::new(
            BigInt::from(693_147_180_559_945_309_417_232_121_458_176_567u128),
            BigInt::from(10u32).pow(36),
        );
        let upper = BigRational::new(
            BigInt::from(693_147_180_559_945_309_417_232_121_458_176_569u128),
            BigInt::from(10u32).pow(36),
        );
        assert!(iv.lo > lower && iv.hi < upper);
    }

    #[test]
    fn enclosures_nest_across_precisions() {
        let n = BigUint::from(49u32);
        let coarse = ln_enclosure(&n, 64);
        let fine = ln_enclosure(&n, 512);
        assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi);
    }

    #[test]
    fn certify_escalates_then_gives_up() {
        let p = Precision {
            start_bits: 16,
            max_bits: 64,
        };
        let mut seen = vec![];
        let r: Result<()> = p.certify("testing", |b| {
            seen.push(b);
            None
        });
        assert_eq!(seen, vec![16, 32, 64]);
        assert!(matches!(r, Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn interval_ops() {
        let a = RatInterval::new(rat(-1, 2), rat(3, 2));
        let b = RatInterval::new(rat(1, 1), rat(2, 1));
        assert_eq!(a.mul(&b), RatInterval::new(rat(-1, 1), rat(3, 1)));
        assert_eq!(a.abs(), RatInterval::new(rat(0, 1), rat(3, 2)));
        assert!(b.div(&a).is_none());
        assert_eq!(a.lt(&rat(2, 1)), Some(true));
        assert_eq!(a.lt(&rat(0, 1)), None);
        assert_eq!(b.gt(&rat(1, 1)), None);
        assert_eq!(b.common_floor(), None);
        assert_eq!(RatInterval::new(rat(5, 4), rat(7, 4)).common_floor(), Some(BigInt::one()));
    }
}
