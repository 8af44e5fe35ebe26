//! Dirichlet L-values through Hurwitz zeta and Euler-Maclaurin.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{BigFloat, PrecisionContext};

/// Kronecker symbol (-7 / n): +1 on the squares {1, 2, 4} mod 7, -1 on the
/// non-squares, 0 on multiples of 7.
pub fn chi_minus7(n: i64) -> i8 {
    match n.rem_euclid(7) {
        0 => 0,
        1 | 2 | 4 => 1,
        _ => -1,
    }
}

/// B_0, B_1, ..., B_max (B_1 = -1/2) from sum_{k<=m} C(m+1, k) B_k = 0.
pub fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    b.push(BigRational::one());
    for m in 1..=max {
        // binomials C(m+1, k) for k = 0..m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * bk;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// zeta(2, a/q) for 0 < a <= q, by Euler-Maclaurin with `n_direct` explicit
/// terms and Bernoulli corrections up to B_{2 m}.
fn hurwitz_zeta2(a: i64, q: i64, n_direct: i64, bern: &[BigRational], p: u32) -> BigFloat {
    // zeta(2, a/q) = sum_{k<N} q^2/(a + qk)^2 + 1/Q + 1/(2 Q^2) + sum_j B_{2j}/Q^{2j+1},
    // Q = (a + qN)/q
    let q2 = BigInt::from(q * q);
    let mut sum = BigFloat::zero(p);
    for k in 0..n_direct {
        let d = BigInt::from(a + q * k);
        sum = &sum + &BigFloat::from_ratio(&q2, &(&d * &d), p);
    }
    let big_q = BigFloat::from_ratio(&BigInt::from(a + q * n_direct), &BigInt::from(q), p);
    let inv_q = &BigFloat::one(p) / &big_q;
    let inv_q2 = &inv_q * &inv_q;
    sum = &sum + &inv_q;
    sum = &sum + &inv_q2.mul_pow2(-1);
    let mut pow = &inv_q2 * &inv_q; // Q^-3
    for j in 1..bern.len() / 2 {
        let b2j = &bern[2 * j];
        sum = &sum + &pow.mul_ratio(b2j.numer(), b2j.denom());
        pow = &pow * &inv_q2;
    }
    sum
}

/// L(s, chi_D). Only D = -7, s = 2 is supported.
pub fn dirichlet_l(discriminant: i64, s: u32, ctx: &PrecisionContext) -> Result<BigFloat> {
    if discriminant != -7 || s != 2 {
        return Err(Error::UnsupportedLValue { discriminant, s });
    }
    let p = ctx.working_bits();
    let digits = ctx.working_digits() as i64;
    // Remainder after B_{2m} with Q ~ N is about (2m)!/(2 pi N)^(2m);
    // N = 4D, 2m = D/2 gives roughly 10^(-1.07 D).
    let n_direct = 4 * digits + 20;
    let two_m = (digits / 2 + 10) as usize;
    let bern = bernoulli_numbers(two_m + 1);
    let mut total = BigFloat::zero(p);
    for a in 1..7 {
        let z = hurwitz_zeta2(a, 7, n_direct, &bern, p);
        total = match chi_minus7(a) {
            1 => &total + &z,
            _ => &total - &z,
        };
    }
    Ok(total.div_i64(49))
}
