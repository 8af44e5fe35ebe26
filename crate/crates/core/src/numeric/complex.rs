use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::float::BigFloat;

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let im = BigFloat::zero(re.prec());
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_real(BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(BigFloat::one(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_real(BigFloat::from_i64(v, prec))
    }

    pub fn from_ratio_i64(num: i64, den: i64, prec: u32) -> Self {
        Self::from_real(BigFloat::from_ratio_i64(num, den, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt()
    }

    /// Cheap magnitude for tolerance tests: max(|re|, |im|).
    pub fn max_norm(&self) -> BigFloat {
        self.re.max_abs(&self.im).abs()
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        Self::new(self.re.mul_ratio(num, den), self.im.mul_ratio(num, den))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Self::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Self::new(self.re.div_i64(k), self.im.div_i64(k))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }

    /// Quotient; None when the divisor is exactly zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if rhs.im.is_zero() {
            return Some(Self::new(&self.re / &rhs.re, &self.im / &rhs.re));
        }
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Some(Self::new(&num.re / &d, &num.im / &d))
    }

    pub fn recip(&self) -> Option<Self> {
        Self::one(self.prec()).checked_div(self)
    }

    /// Principal square root: cut along the negative real axis, and a
    /// negative real argument maps to the positive imaginary axis.
    pub fn sqrt(&self) -> Self {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                Self::new(BigFloat::zero(self.prec()), (-&self.re).sqrt())
            } else {
                Self::new(self.re.sqrt(), BigFloat::zero(self.prec()))
            };
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let t = (&r + &self.re).mul_pow2(-1).sqrt();
            let im = (&self.im / &t).mul_pow2(-1);
            Self::new(t, im)
        } else {
            let t = (&r - &self.re).mul_pow2(-1).sqrt();
            let re = (&self.im.abs() / &t).mul_pow2(-1);
            let im = if self.im.is_negative() { -&t } else { t };
            Self::new(re, im)
        }
    }

    /// Principal k-th root (argument divided by k).
    pub fn root(&self, k: u32) -> Self {
        assert!(k > 0, "root of order zero");
        match k {
            1 => self.clone(),
            2 => self.sqrt(),
            4 => self.sqrt().sqrt(),
            _ => self.root_newton(k),
        }
    }

    fn root_newton(&self, k: u32) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let (re, im) = (self.re.to_f64(), self.im.to_f64());
        let (r, th) = (re.hypot(im), im.atan2(re));
        let (rk, tk) = (r.powf(1.0 / k as f64), th / k as f64);
        let mut w = Self::from_f64(rk * tk.cos(), rk * tk.sin(), prec);
        // Newton doubles correct digits from ~15 per step.
        let mut good = 15.0;
        let need = prec as f64 * std::f64::consts::LOG10_2 + 5.0;
        while good < need {
            let wk1 = w.powi(k as i64 - 1);
            let wk = &wk1 * &w;
            let step = (&wk - self)
                .checked_div(&wk1.mul_i64(k as i64))
                .expect("nonzero Newton derivative for a nonzero root");
            w = &w - &step;
            good *= 2.0;
        }
        let wk1 = w.powi(k as i64 - 1);
        let step = (&(&wk1 * &w) - self)
            .checked_div(&wk1.mul_i64(k as i64))
            .expect("nonzero Newton derivative for a nonzero root");
        &w - &step
    }

    pub fn powi(&self, n: i64) -> Self {
        let prec = self.prec();
        let mut base = if n < 0 {
            self.recip().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(prec);
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

    pub fn to_decimal(&self, digits: usize) -> String {
        if self.im.is_zero() {
            return self.re.to_decimal(digits);
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        format!(
            "{} {} {}i",
            self.re.to_decimal(digits),
            sign,
            self.im.abs().to_decimal(digits)
        )
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| self.re.decimal_digits().max(1));
        f.write_str(&self.to_decimal(digits))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            let p = self.prec().max(rhs.prec());
            return BigComplex::new(&self.re * &rhs.re, BigFloat::zero(p));
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        BigComplex::new(re, im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex { (&self).$m(&rhs) }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &BigComplex, b: &BigComplex, digits: f64) -> bool {
        (a - b).abs().log10_abs() < -digits
    }

    #[test]
    fn sqrt_branch_cut() {
        let m4 = BigComplex::from_i64(-4, P);
        let r = m4.sqrt();
        assert!(close(&r, &BigComplex::new(BigFloat::zero(P), BigFloat::from_i64(2, P)), 70.0));
        // just below the cut the root flips to the lower half-plane
        let below = BigComplex::new(BigFloat::from_i64(-4, P), BigFloat::from_f64(-1e-30, P));
        assert!(below.sqrt().im.is_negative());
    }

    #[test]
    fn sqrt_squares_back() {
        let z = BigComplex::from_f64(-0.3, 0.7, P);
        let r = z.sqrt();
        assert!(!r.re.is_negative());
        assert!(close(&(&r * &r), &z, 70.0));
    }

    #[test]
    fn cube_root_principal() {
        let z = BigComplex::from_f64(-8.0, 0.0, P);
        let r = z.root(3);
        // principal cube root of -8 is 1 + sqrt(3) i
        let expect = BigComplex::new(BigFloat::from_i64(1, P), BigFloat::from_i64(3, P).sqrt());
        assert!(close(&r, &expect, 70.0));
    }

    #[test]
    fn division() {
        let a = BigComplex::from_f64(1.0, 2.0, P);
        let b = BigComplex::from_f64(3.0, -4.0, P);
        let q = a.checked_div(&b).unwrap();
        assert!(close(&(&q * &b), &a, 70.0));
        assert!(a.checked_div(&BigComplex::zero(P)).is_none());
    }
}
