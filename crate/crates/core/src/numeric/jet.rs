//! Truncated Taylor series ("jets") with big-complex coefficients.
//!
//! `coeffs[i]` is f^(i)(base)/i!. Binary operations require both operands
//! to share the expansion point and order; mixing them is a programming
//! error and panics.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::analytic::is_singular;
use super::complex::BigComplex;
use super::float::BigFloat;
use crate::error::{Error, Result};

pub const DEFAULT_JET_ORDER: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    base: BigComplex,
    coeffs: Vec<BigComplex>,
}

impl Jet {
    pub fn from_coeffs(base: BigComplex, coeffs: Vec<BigComplex>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { base, coeffs }
    }

    /// The identity function x at `base`.
    pub fn variable(base: &BigComplex, order: usize) -> Self {
        let prec = base.prec();
        let mut coeffs = vec![BigComplex::zero(prec); order + 1];
        coeffs[0] = base.clone();
        if order >= 1 {
            coeffs[1] = BigComplex::one(prec);
        }
        Self::from_coeffs(base.clone(), coeffs)
    }

    pub fn constant(base: &BigComplex, order: usize, value: BigComplex) -> Self {
        let prec = value.prec();
        let mut coeffs = vec![BigComplex::zero(prec); order + 1];
        coeffs[0] = value;
        Self::from_coeffs(base.clone(), coeffs)
    }

    pub fn base(&self) -> &BigComplex {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigComplex {
        &self.coeffs[i]
    }

    pub fn value(&self) -> &BigComplex {
        &self.coeffs[0]
    }

    /// i-th derivative at the base point: i! * c_i.
    pub fn derivative_at_base(&self, i: usize) -> BigComplex {
        let mut f = BigInt::from(1);
        for k in 2..=i {
            f *= k;
        }
        self.coeffs[i].mul_ratio(&f, &BigInt::from(1))
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise jet order by truncation");
        Self::from_coeffs(self.base.clone(), self.coeffs[..=order].to_vec())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "jet order mismatch");
        assert!(self.base == other.base, "jet base point mismatch");
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigComplex, &BigComplex) -> BigComplex) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(a, b))
            .collect();
        Self::from_coeffs(self.base.clone(), coeffs)
    }

    fn map(&self, f: impl Fn(&BigComplex) -> BigComplex) -> Self {
        Self::from_coeffs(self.base.clone(), self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        self.map(|a| a * c)
    }

    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        self.map(|a| a.mul_ratio(num, den))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        self.map(|a| a.mul_pow2(k))
    }

    /// Cauchy product truncated at the common order. Terms j and n-j are
    /// added pairwise so that the product commutes bit for bit.
    pub fn mul_jet(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let d = self.order();
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..=d)
            .map(|n| {
                let mut acc: Option<BigComplex> = None;
                for j in 0..=n / 2 {
                    let k = n - j;
                    let t = if j == k {
                        &a[j] * &b[k]
                    } else {
                        &(&a[j] * &b[k]) + &(&a[k] * &b[j])
                    };
                    acc = Some(match acc {
                        Some(s) => &s + &t,
                        None => t,
                    });
                }
                acc.expect("n >= 0")
            })
            .collect();
        Self::from_coeffs(self.base.clone(), coeffs)
    }

    /// Quotient by back-substitution.
    pub fn div_jet(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other);
        let b0 = &other.coeffs[0];
        if is_singular(b0) {
            return Err(Error::DivisionBySingularJet);
        }
        let mut q: Vec<BigComplex> = Vec::with_capacity(self.coeffs.len());
        for n in 0..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for j in 1..=n {
                acc = &acc - &(&other.coeffs[j] * &q[n - j]);
            }
            q.push(acc.checked_div(b0).ok_or(Error::DivisionBySingularJet)?);
        }
        Ok(Self::from_coeffs(self.base.clone(), q))
    }

    /// Principal k-th root: root of c0, then the power recurrence
    /// n a0 b_n = sum_{j=1..n} ((1/k + 1) j - n) a_j b_{n-j}.
    pub fn root(&self, k: u32) -> Result<Self> {
        assert!(k > 0, "root of order zero");
        let a0 = &self.coeffs[0];
        if is_singular(a0) {
            return Err(Error::DivisionBySingularJet);
        }
        let k = k as i64;
        let mut b = Vec::with_capacity(self.coeffs.len());
        b.push(a0.root(k as u32));
        for n in 1..=self.order() {
            let mut acc = BigComplex::zero(a0.prec());
            for j in 1..=n {
                let w = (k + 1) * j as i64 - k * n as i64;
                if w != 0 {
                    acc = &acc + &(&self.coeffs[j] * &b[n - j]).mul_i64(w);
                }
            }
            let den = a0.mul_i64(k * n as i64);
            b.push(acc.checked_div(&den).ok_or(Error::DivisionBySingularJet)?);
        }
        Ok(Self::from_coeffs(self.base.clone(), b))
    }

    /// d/dx, lowering the order by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderExhausted);
        }
        let coeffs = (1..=self.order())
            .map(|i| self.coeffs[i].mul_i64(i as i64))
            .collect();
        Ok(Self::from_coeffs(self.base.clone(), coeffs))
    }

    /// Largest coefficient magnitude (max of |re|, |im| over all coefficients).
    pub fn magnitude(&self) -> BigFloat {
        let mut best = self.coeffs[0].max_norm();
        for c in &self.coeffs[1..] {
            let m = c.max_norm();
            if m.cmp_abs(&best).is_gt() {
                best = m;
            }
        }
        best
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|a| -a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 300;

    fn c(v: i64) -> BigComplex {
        BigComplex::from_i64(v, P)
    }

    fn jet(base: i64, cs: &[i64]) -> Jet {
        Jet::from_coeffs(c(base), cs.iter().map(|&v| c(v)).collect())
    }

    fn ints(j: &Jet) -> Vec<i64> {
        j.coeffs()
            .iter()
            .map(|z| {
                assert!(z.im.is_zero() || z.im.log10_abs() < -80.0);
                i64::try_from(z.re.round_to_bigint()).unwrap()
            })
            .collect()
    }

    #[test]
    fn square_of_x_at_three() {
        let x = Jet::variable(&c(3), 2);
        assert_eq!(ints(&(&x * &x)), vec![9, 6, 1]);
    }

    #[test]
    fn square_of_x_plus_two_at_zero() {
        let a = jet(0, &[2, 1, 0]);
        assert_eq!(ints(&(&a * &a)), vec![4, 4, 1]);
    }

    #[test]
    fn self_quotient_is_one() {
        let a = jet(1, &[5, -3, 7, 2]);
        let q = a.div_jet(&a).unwrap();
        let expect = [1, 0, 0, 0];
        for (z, e) in q.coeffs().iter().zip(expect) {
            assert!((z - &c(e)).abs().log10_abs() < -80.0 || (z - &c(e)).is_zero());
        }
    }

    #[test]
    fn singular_division_is_rejected() {
        let a = jet(0, &[1, 1]);
        let b = jet(0, &[0, 1]);
        assert!(matches!(a.div_jet(&b), Err(Error::DivisionBySingularJet)));
        assert!(matches!(b.root(2), Err(Error::DivisionBySingularJet)));
    }

    #[test]
    fn root_of_square() {
        let a = jet(0, &[4, 4, 1]);
        assert_eq!(ints(&a.root(2).unwrap()), vec![2, 1, 0]);
        assert_eq!(ints(&jet(0, &[1, 0, 0]).root(5).unwrap()), vec![1, 0, 0]);
    }

    #[test]
    fn derivatives() {
        assert_eq!(ints(&jet(0, &[9, 6, 1]).derivative().unwrap()), vec![6, 2]);
        assert_eq!(ints(&jet(0, &[7, 0, 0]).derivative().unwrap()), vec![0, 0]);
        assert!(matches!(jet(0, &[7]).derivative(), Err(Error::OrderExhausted)));
    }

    #[test]
    #[should_panic(expected = "base point mismatch")]
    fn mismatched_bases_panic() {
        let _ = &jet(0, &[1, 1]) + &jet(1, &[1, 1]);
    }
}
