use num_bigint::BigInt;

use super::complex::BigComplex;
use super::float::BigFloat;
use super::jet::Jet;
use crate::error::{Error, Result};

/// Bits of slack below the working precision that still count as nonzero.
const SINGULAR_SLACK: i64 = 16;

/// |c| below 10^(-working digits), measured against the value's own
/// precision.
pub(crate) fn is_singular(c: &BigComplex) -> bool {
    match c.max_norm().top_exponent() {
        None => true,
        Some(t) => t < -(c.prec() as i64 - SINGULAR_SLACK),
    }
}

/// Quantities that can flow through the same analytic expression: plain
/// scalars, or jets carrying derivatives along with the value.
///
/// A jet of order 0 follows exactly the same arithmetic as the scalar, so
/// both paths round identically.
pub trait Analytic: Clone + Send + Sync {
    /// A constant with the same shape as `self`.
    fn lift(&self, c: BigComplex) -> Self;
    fn lead(&self) -> &BigComplex;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn over(&self, o: &Self) -> Result<Self>;
    fn root(&self, k: u32) -> Result<Self>;
    fn scale(&self, c: &BigComplex) -> Self;
    fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self;
    fn mul_pow2(&self, k: i64) -> Self;
    /// Largest coefficient magnitude.
    fn magnitude(&self) -> BigFloat;

    fn sqrt(&self) -> Result<Self> {
        self.root(2)
    }

    fn prec(&self) -> u32 {
        self.lead().prec()
    }

    fn lift_i64(&self, v: i64) -> Self {
        self.lift(BigComplex::from_i64(v, self.prec()))
    }

    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        self.lift(BigComplex::from_ratio_i64(num, den, self.prec()))
    }

    fn plus_i64(&self, v: i64) -> Self {
        self.plus(&self.lift_i64(v))
    }

    /// v - self
    fn rsub_i64(&self, v: i64) -> Self {
        self.lift_i64(v).minus(self)
    }
}

impl Analytic for BigComplex {
    fn lift(&self, c: BigComplex) -> Self {
        c
    }
    fn lead(&self) -> &BigComplex {
        self
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn over(&self, o: &Self) -> Result<Self> {
        if is_singular(o) {
            return Err(Error::DivisionBySingularJet);
        }
        self.checked_div(o).ok_or(Error::DivisionBySingularJet)
    }
    fn root(&self, k: u32) -> Result<Self> {
        // a scalar root is defined at 0; only jets need c0 != 0
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(BigComplex::root(self, k))
    }
    fn scale(&self, c: &BigComplex) -> Self {
        self * c
    }
    fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        BigComplex::mul_ratio(self, num, den)
    }
    fn mul_pow2(&self, k: i64) -> Self {
        BigComplex::mul_pow2(self, k)
    }
    fn magnitude(&self) -> BigFloat {
        self.max_norm()
    }
}

impl Analytic for Jet {
    fn lift(&self, c: BigComplex) -> Self {
        Jet::constant(self.base(), self.order(), c)
    }
    fn lead(&self) -> &BigComplex {
        self.value()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn over(&self, o: &Self) -> Result<Self> {
        self.div_jet(o)
    }
    fn root(&self, k: u32) -> Result<Self> {
        Jet::root(self, k)
    }
    fn scale(&self, c: &BigComplex) -> Self {
        Jet::scale(self, c)
    }
    fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> Self {
        Jet::mul_ratio(self, num, den)
    }
    fn mul_pow2(&self, k: i64) -> Self {
        Jet::mul_pow2(self, k)
    }
    fn magnitude(&self) -> BigFloat {
        Jet::magnitude(self)
    }
}
