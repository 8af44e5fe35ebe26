//! Binary floating point with an arbitrary, per-value mantissa width.
//!
//! A value is `(-1)^neg * mag * 2^exp` where `mag` has exactly `prec` bits
//! (or is zero). Every operation rounds once, to nearest with ties away from
//! zero, at the larger precision of its operands, so results are a pure
//! function of the inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigFloat {
    neg: bool,
    mag: BigUint,
    exp: i64,
    prec: u32,
}

fn round_mag(mag: BigUint, exp: i64, prec: u32) -> (BigUint, i64) {
    let bits = mag.bits();
    if bits == 0 {
        return (mag, 0);
    }
    let p = prec as u64;
    match bits.cmp(&p) {
        Ordering::Greater => {
            let shift = bits - p;
            let half = mag.bit(shift - 1);
            let mut m = mag >> shift;
            let mut e = exp + shift as i64;
            if half {
                m += 1u32;
                if m.bits() > p {
                    m >>= 1;
                    e += 1;
                }
            }
            (m, e)
        }
        Ordering::Less => {
            let shift = p - bits;
            (mag << shift, exp - shift as i64)
        }
        Ordering::Equal => (mag, exp),
    }
}

/// Round `mag * 2^exp` to the nearest integer, ties away from zero.
fn round_scaled(mag: &BigUint, exp: i64) -> BigUint {
    if exp >= 0 {
        mag << exp as u64
    } else {
        let shift = (-exp) as u64;
        if shift > mag.bits() {
            return BigUint::zero();
        }
        let half = mag.bit(shift - 1);
        let mut m = mag >> shift;
        if half {
            m += 1u32;
        }
        m
    }
}

impl BigFloat {
    fn build(neg: bool, mag: BigUint, exp: i64, prec: u32) -> Self {
        let (mag, exp) = round_mag(mag, exp, prec);
        let neg = neg && !mag.is_zero();
        BigFloat {
            neg,
            mag,
            exp,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat {
            neg: false,
            mag: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::build(v < 0, BigUint::from(v.unsigned_abs()), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::build(v.is_negative(), v.magnitude().clone(), 0, prec)
    }

    /// `num / den`, rounded once.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "BigFloat::from_ratio with zero denominator");
        let neg = num.is_negative() != den.is_negative();
        Self::div_mags(neg, num.magnitude(), 0, den.magnitude(), 0, prec)
    }

    pub fn from_ratio_i64(num: i64, den: i64, prec: u32) -> Self {
        Self::from_ratio(&BigInt::from(num), &BigInt::from(den), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "BigFloat::from_f64 of a non-finite value");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self::build(neg, BigUint::from(m), e, prec)
    }

    /// 10^k.
    pub fn pow10(k: i64, prec: u32) -> Self {
        let p = num_traits::pow(BigInt::from(10u32), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_bigint(&p, prec)
        } else {
            Self::from_ratio(&BigInt::one(), &p, prec)
        }
    }

    /// Parse a decimal literal such as `-1.25e-3`, rounding once.
    pub fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        let s = s.trim();
        let (mantissa, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.find('.') {
            Some(i) => (&digits[..i], &digits[i + 1..]),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let all: String = [int_part, frac_part].concat();
        if !all.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut n: BigInt = all.parse().ok()?;
        if neg {
            n = -n;
        }
        let scale = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        if scale >= 0 {
            let p = num_traits::pow(ten, scale as usize);
            Some(Self::from_bigint(&(n * p), prec))
        } else {
            let p = num_traits::pow(ten, (-scale) as usize);
            Some(Self::from_ratio(&n, &p, prec))
        }
    }

    /// pi by Machin's formula in fixed point.
    pub fn pi(prec: u32) -> Self {
        let w = prec as u64 + 32;
        fn atan_inv(x: u32, w: u64) -> BigInt {
            let x2 = BigInt::from(x) * BigInt::from(x);
            let mut term = (BigInt::one() << w) / BigInt::from(x);
            let mut sum = term.clone();
            let mut k: u64 = 1;
            loop {
                term /= &x2;
                if term.is_zero() {
                    break;
                }
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        }
        let fixed: BigInt = atan_inv(5, w) * 16u32 - atan_inv(239, w) * 4u32;
        Self::build(false, fixed.magnitude().clone(), -(w as i64), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-round (or zero-extend) to another precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::build(self.neg, self.mag.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        r.neg = false;
        r
    }

    /// |x| < 2^top_exponent, and |x| >= 2^(top_exponent - 1). None for zero.
    pub fn top_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mag.bits() as i64)
        }
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.exp += k;
        r
    }

    /// `self * num / den` with a single rounding.
    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "BigFloat::mul_ratio with zero denominator");
        let neg = self.neg ^ num.is_negative() ^ den.is_negative();
        let top = &self.mag * num.magnitude();
        Self::div_mags(neg, &top, self.exp, den.magnitude(), 0, self.prec)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let m = &self.mag * BigUint::from(k.unsigned_abs());
        Self::build(self.neg ^ (k < 0), m, self.exp, self.prec)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "BigFloat::div_i64 by zero");
        Self::div_mags(
            self.neg ^ (k < 0),
            &self.mag,
            self.exp,
            &BigUint::from(k.unsigned_abs()),
            0,
            self.prec,
        )
    }

    fn div_mags(neg: bool, a: &BigUint, ea: i64, b: &BigUint, eb: i64, prec: u32) -> Self {
        if a.is_zero() {
            return Self::zero(prec);
        }
        let want = prec as i64 + 2 + b.bits() as i64 - a.bits() as i64;
        let s = want.max(0) as u64;
        let q = (a << s) / b;
        Self::build(neg, q, ea - s as i64 - eb, prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.neg, "BigFloat::sqrt of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as i64;
        let mut k = (2 * p + 4 - self.mag.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let r = (&self.mag << k as u64).sqrt();
        Self::build(false, r, (self.exp - k) / 2, self.prec)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 {
            &Self::one(self.prec) / self
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.top_exponent(), other.top_exponent()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(ta), Some(tb)) if ta != tb => ta.cmp(&tb),
            _ => {
                let e = self.exp.min(other.exp);
                let a = &self.mag << (self.exp - e) as u64;
                let b = &other.mag << (other.exp - e) as u64;
                a.cmp(&b)
            }
        }
    }

    /// Numeric comparison, ignoring precision.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.neg, other.neg) {
            (false, true) => {
                if self.is_zero() && other.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            (true, false) => Ordering::Less,
            (false, false) => self.cmp_abs(other),
            (true, true) => other.cmp_abs(self),
        }
    }

    pub fn max_abs<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self.cmp_abs(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_bigint(&self) -> BigInt {
        let m = round_scaled(&self.mag, self.exp);
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, m)
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            let m = BigInt::from(&self.mag << self.exp as u64);
            return if self.neg { -m } else { m };
        }
        let shift = (-self.exp) as u64;
        let q = &self.mag >> shift;
        let exact = (&q << shift) == self.mag;
        let q = BigInt::from(q);
        if self.neg {
            if exact {
                -q
            } else {
                -q - 1
            }
        } else {
            q
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mag >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        let e = self.exp + shift as i64;
        let e = e.clamp(-4000, 4000) as i32;
        let half = e / 2;
        let v = top * 2f64.powi(half) * 2f64.powi(e - half);
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// log10 |x|, accurate to about 1e-15 absolute; -inf for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mag >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        top.log10() + (self.exp + shift as i64) as f64 * std::f64::consts::LOG10_2
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let ten = BigUint::from(10u32);
        let mut e10 = self.log10_abs().floor() as i64;
        let lo = num_traits::pow(ten.clone(), digits - 1);
        let hi = &lo * &ten;
        let n = loop {
            let k = digits as i64 - 1 - e10;
            let n = if k >= 0 {
                round_scaled(&(&self.mag * num_traits::pow(ten.clone(), k as usize)), self.exp)
            } else {
                let d = num_traits::pow(ten.clone(), (-k) as usize);
                // round(mag * 2^exp / d)
                let (num, den) = if self.exp >= 0 {
                    (&self.mag << self.exp as u64, d)
                } else {
                    (self.mag.clone(), d << (-self.exp) as u64)
                };
                (num * 2u32 + &den) / (den * 2u32)
            };
            if n >= hi {
                e10 += 1;
            } else if n < lo {
                e10 -= 1;
            } else {
                break n;
            }
        };
        let s = n.to_string();
        let sign = if self.neg { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
        }
    }

    /// Decimal digits this value's mantissa can hold.
    pub fn decimal_digits(&self) -> usize {
        ((self.prec as f64) * std::f64::consts::LOG10_2).floor() as usize
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let p = self.prec.max(other.prec);
        let other_neg = other.neg ^ negate_other;
        if other.is_zero() {
            return self.with_prec(p);
        }
        if self.is_zero() {
            return Self::build(other_neg, other.mag.clone(), other.exp, p);
        }
        let ta = self.exp + self.mag.bits() as i64;
        let tb = other.exp + other.mag.bits() as i64;
        let gap = p as i64 + 2;
        if ta - tb > gap {
            return self.with_prec(p);
        }
        if tb - ta > gap {
            return Self::build(other_neg, other.mag.clone(), other.exp, p);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mag << (self.exp - e) as u64;
        let b = &other.mag << (other.exp - e) as u64;
        if self.neg == other_neg {
            Self::build(self.neg, a + b, e, p)
        } else {
            match a.cmp(&b) {
                Ordering::Equal => Self::zero(p),
                Ordering::Greater => Self::build(self.neg, a - b, e, p),
                Ordering::Less => Self::build(other_neg, b - a, e, p),
            }
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.decimal_digits().clamp(1, 40)))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.decimal_digits().max(1));
        f.write_str(&self.to_decimal(digits))
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, false)
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, true)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        BigFloat::build(
            self.neg ^ rhs.neg,
            &self.mag * &rhs.mag,
            self.exp + rhs.exp,
            p,
        )
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let p = self.prec.max(rhs.prec);
        BigFloat::div_mags(self.neg ^ rhs.neg, &self.mag, self.exp, &rhs.mag, rhs.exp, p)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        let mut r = self.clone();
        r.neg = !r.neg && !r.mag.is_zero();
        r
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat { (&self).$m(&rhs) }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat { (&self).$m(rhs) }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}
