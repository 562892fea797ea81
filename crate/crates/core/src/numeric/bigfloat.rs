//! Binary floating point with an arbitrary-length mantissa.
//!
//! A value is `mant * 2^exp`, rounded to `prec` significant bits after every operation.
//! `prec == 0` marks an exact value (small constants); results take the larger precision of
//! their operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Num, One, ToPrimitive, Zero};

use super::Real;

const DEFAULT_DIV_PREC: u32 = 128;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_to(mant: BigInt, mut exp: i64, prec: u32) -> BigFloat {
    if mant.is_zero() {
        return BigFloat { mant, exp: 0, prec };
    }
    let mut mant = mant;
    let bits = mant.bits();
    if prec > 0 && bits > prec as u64 {
        let shift = bits - prec as u64;
        let (sign, mag) = mant.into_parts();
        let mut q: BigUint = &mag >> shift;
        if mag.bit(shift - 1) {
            q += 1u32;
        }
        mant = BigInt::from_biguint(sign, q);
        exp += shift as i64;
    }
    if let Some(tz) = mant.trailing_zeros() {
        if tz > 0 {
            mant >>= tz;
            exp += tz as i64;
        }
    }
    BigFloat { mant, exp, prec }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    if x == 0.0 {
        return x;
    }
    if e > 2200 {
        return x * f64::INFINITY;
    }
    if e < -2300 {
        return x * 0.0;
    }
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl BigFloat {
    /// Exact conversion of a finite `f64`, then rounding to `prec` bits.
    pub fn from_f64(x: f64, prec: u32) -> BigFloat {
        assert!(x.is_finite(), "BigFloat::from_f64 on non-finite value");
        if x == 0.0 {
            return BigFloat { mant: BigInt::zero(), exp: 0, prec };
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        let sign = if x < 0.0 { Sign::Minus } else { Sign::Plus };
        round_to(BigInt::from_biguint(sign, BigUint::from(m)), e, prec)
    }

    pub fn from_int(v: BigInt, prec: u32) -> BigFloat {
        round_to(v, 0, prec)
    }

    pub fn zero_with(prec: u32) -> BigFloat {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Nearest `f64`, saturating to infinity or zero outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let mag = self.mant.magnitude();
        let (m, e) = if bits > 64 {
            (mag >> (bits - 64), self.exp + (bits - 64) as i64)
        } else {
            (mag.clone(), self.exp)
        };
        let v = ldexp(m.to_u64().expect("at most 64 bits") as f64, e);
        if self.mant.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }

    /// Position just above the most significant bit.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn add_signed(&self, other: &BigFloat, negate: bool) -> BigFloat {
        let prec = self.prec.max(other.prec);
        let other_mant = || if negate { -other.mant.clone() } else { other.mant.clone() };
        if other.mant.is_zero() {
            return round_to(self.mant.clone(), self.exp, prec);
        }
        if self.mant.is_zero() {
            return round_to(other_mant(), other.exp, prec);
        }
        if prec > 0 {
            let p = prec as i64 + 2;
            if other.top() < self.top() - p {
                return round_to(self.mant.clone(), self.exp, prec);
            }
            if self.top() < other.top() - p {
                return round_to(other_mant(), other.exp, prec);
            }
        }
        let (hi, hi_exp, lo, lo_exp) = if self.exp >= other.exp {
            (self.mant.clone(), self.exp, other_mant(), other.exp)
        } else {
            (other_mant(), other.exp, self.mant.clone(), self.exp)
        };
        round_to((hi << (hi_exp - lo_exp) as usize) + lo, lo_exp, prec)
    }

    fn mul_ref(&self, other: &BigFloat) -> BigFloat {
        round_to(&self.mant * &other.mant, self.exp + other.exp, self.prec.max(other.prec))
    }

    fn div_ref(&self, other: &BigFloat) -> BigFloat {
        assert!(!other.mant.is_zero(), "BigFloat division by zero");
        let prec = match self.prec.max(other.prec) {
            0 => DEFAULT_DIV_PREC,
            p => p,
        };
        if self.mant.is_zero() {
            return BigFloat::zero_with(prec);
        }
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as usize) / &other.mant;
        round_to(q, self.exp - shift - other.exp, prec)
    }

    fn cmp_abs(&self, other: &BigFloat) -> Ordering {
        match (self.mant.is_zero(), other.mant.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            o => return o,
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.magnitude() << (self.exp - e) as usize;
        let b = other.mant.magnitude() << (other.exp - e) as usize;
        a.cmp(&b)
    }

    pub fn sqrt(&self) -> BigFloat {
        assert!(self.mant.sign() != Sign::Minus, "BigFloat sqrt of negative value");
        let prec = if self.prec == 0 { DEFAULT_DIV_PREC } else { self.prec };
        if self.mant.is_zero() {
            return BigFloat::zero_with(prec);
        }
        let mag = self.mant.magnitude();
        let mut shift = (2 * prec as i64 + 2 - mag.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = mag << shift as usize;
        round_to(BigInt::from(m.sqrt()), (self.exp - shift) / 2, prec)
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> BigFloat {
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    fn trunc(&self) -> BigFloat {
        if self.exp >= 0 {
            return self.clone();
        }
        let (sign, mag) = self.mant.clone().into_parts();
        round_to(BigInt::from_biguint(sign, mag >> (-self.exp) as usize), 0, self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        Some(match rank(sa).cmp(&rank(sb)) {
            Ordering::Equal if sa == Sign::Minus => other.cmp_abs(self),
            Ordering::Equal => self.cmp_abs(other),
            o => o,
        })
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                $body(self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigFloat, b: &BigFloat| a.add_signed(b, false));
binop!(Sub, sub, |a: &BigFloat, b: &BigFloat| a.add_signed(b, true));
binop!(Mul, mul, |a: &BigFloat, b: &BigFloat| a.mul_ref(b));
binop!(Div, div, |a: &BigFloat, b: &BigFloat| a.div_ref(b));
binop!(Rem, rem, |a: &BigFloat, b: &BigFloat| a - &(&a.div_ref(b).trunc() * b));

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat::zero_with(0)
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat { mant: BigInt::one(), exp: 0, prec: 0 }
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Ok(BigFloat::from_f64(s.parse::<f64>()?, 0))
    }
}

impl Real for BigFloat {
    fn abs_val(&self) -> Self {
        let mant = BigInt::from_biguint(Sign::Plus, self.mant.magnitude().clone());
        BigFloat { mant, exp: self.exp, prec: self.prec }
    }
    fn sqrt_val(&self) -> Self {
        self.sqrt()
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn lift_like(&self, x: f64) -> Self {
        BigFloat::from_f64(x, self.prec)
    }
}
