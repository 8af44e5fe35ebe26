use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::formula::FormulaSpec;
use crate::error::{Error, Result};
use crate::numeric::{digits_agreed, Analytic, BigComplex, BigFloat, PrecisionContext};
use crate::rational::Rational;

/// Hard cap on summation length; every convergent catalog series needs far
/// fewer terms.
const MAX_TERMS: u64 = 2_000_000;

fn rising_ratio(params: &[Rational], n: u64) -> Rational {
    let n = Rational::from_integer(BigInt::from(n));
    params
        .iter()
        .fold(Rational::one(), |acc, p| acc * (&n + p))
}

/// Exact T(n+1)/T(n) of prod (u)_n / prod (l)_n * z^n, as a reduced pair.
pub fn term_ratio(f: &FormulaSpec, n: u64) -> (BigInt, BigInt) {
    let r = rising_ratio(&f.upper, n) / rising_ratio(&f.lower, n) * &f.z;
    let (num, den) = (r.numer().clone(), r.denom().clone());
    (num, den)
}

/// prod (u)_n / prod (l)_n * z^n by direct products; a reference for the
/// incremental recurrence.
pub fn pochhammer_part(f: &FormulaSpec, n: u64) -> Rational {
    let poch = |params: &[Rational]| {
        let mut acc = Rational::one();
        for p in params {
            for k in 0..n {
                acc *= p + Rational::from_integer(BigInt::from(k));
            }
        }
        acc
    };
    let mut zn = Rational::one();
    for _ in 0..n {
        zn *= &f.z;
    }
    poch(&f.upper) / poch(&f.lower) * zn
}

/// The full summand scale * T(n) * P(n) / D(n), exactly.
pub fn exact_summand(f: &FormulaSpec, n: u64) -> Rational {
    let tail = Rational::new(f.eval_poly(n), f.denom_pattern.eval(n));
    pochhammer_part(f, n) * tail * &f.scale
}

/// Exact summands for n = start..start+count, via the ratio recurrence.
pub fn exact_terms(f: &FormulaSpec, count: usize) -> Vec<Rational> {
    let mut t = Rational::one();
    let mut out = Vec::with_capacity(count);
    let mut n = 0u64;
    while out.len() < count {
        if n >= f.start_index as u64 {
            let tail = Rational::new(f.eval_poly(n), f.denom_pattern.eval(n));
            out.push(&t * tail * &f.scale);
        }
        let (a, b) = term_ratio(f, n);
        t *= Rational::new(a, b);
        n += 1;
    }
    out
}

#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: BigFloat,
    pub terms_used: u64,
}

/// Sum a convergent series to the context's working precision.
pub fn sum_series(f: &FormulaSpec, ctx: &PrecisionContext) -> Result<SeriesSum> {
    if !f.convergent {
        return Err(Error::DivergentSeries);
    }
    let p = ctx.working_bits();
    let eps = ctx.working_eps();
    let rho = f.z_abs();
    // |term| * 2 rho / (1 - rho) < eps  <=>  |term| < eps * (1 - rho) / (2 rho)
    let tail_factor = if rho == 0.0 {
        1.0
    } else {
        ((1.0 - rho) / (2.0 * rho)).min(1.0)
    };
    let tail_eps = eps.mul_pow2(-(tail_factor.log2().abs().ceil() as i64));
    let scale_num = f.scale.numer();
    let scale_den = f.scale.denom();

    let mut t = BigFloat::one(p);
    let mut sum = BigFloat::zero(p);
    let mut n = 0u64;
    let mut small_run = 0;
    loop {
        if n >= f.start_index as u64 {
            let num = f.eval_poly(n) * scale_num;
            let den = f.denom_pattern.eval(n) * scale_den;
            let term = t.mul_ratio(&num, &den);
            sum = &sum + &term;
            let bound = if sum.is_zero() {
                tail_eps.clone()
            } else {
                tail_eps.mul_pow2(sum.top_exponent().unwrap_or(0).max(0))
            };
            if term.cmp_abs(&bound).is_lt() {
                small_run += 1;
                if small_run >= 2 || f.z.is_zero() {
                    return Ok(SeriesSum {
                        value: sum,
                        terms_used: n + 1 - f.start_index as u64,
                    });
                }
            } else {
                small_run = 0;
            }
        }
        if n >= MAX_TERMS {
            return Err(Error::PrecisionExhausted(format!(
                "series not converged after {MAX_TERMS} terms"
            )));
        }
        let (a, b) = term_ratio(f, n);
        if a.is_zero() {
            if n >= f.start_index as u64 {
                return Ok(SeriesSum {
                    value: sum,
                    terms_used: n + 1 - f.start_index as u64,
                });
            }
            t = BigFloat::zero(p);
        } else {
            t = t.mul_ratio(&a, &b);
        }
        n += 1;
    }
}

/// sum_n prod (u)_n / prod (l)_n * y^n for analytic y (scalar or jet),
/// |y| < 1.
pub fn sum_hypergeometric<T: Analytic>(
    upper: &[Rational],
    lower: &[Rational],
    y: &T,
    ctx: &PrecisionContext,
) -> Result<T> {
    let yabs = y.lead().abs().to_f64();
    if yabs >= 1.0 {
        return Err(Error::DivergentSeries);
    }
    let eps = ctx.working_eps();
    let mut term = y.lift_i64(1);
    let mut sum = term.clone();
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let r = rising_ratio(upper, n) / rising_ratio(lower, n);
        if r.is_zero() {
            return Ok(sum);
        }
        term = term.times(y).mul_ratio(r.numer(), r.denom());
        sum = sum.plus(&term);
        // jets carry derivatives, whose terms decay more slowly by a
        // polynomial factor; demand several consecutive small terms
        if term.magnitude().cmp_abs(&eps).is_lt() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::PrecisionExhausted(
        "hypergeometric series did not converge".into(),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "match")]
    pub matched: bool,
    pub digits_agreed: u32,
    pub terms_used: u64,
    pub target_digits: u32,
    pub guard_digits: u32,
}

/// Compare the series with its closed form. A shortfall triggers one retry
/// with doubled guard digits.
pub fn verify_formula(f: &FormulaSpec, ctx: &PrecisionContext) -> Result<VerifyReport> {
    let first = verify_once(f, ctx)?;
    if first.matched {
        return Ok(first);
    }
    let retry = verify_once(f, &ctx.doubled_guard())?;
    Ok(if retry.digits_agreed > first.digits_agreed {
        retry
    } else {
        first
    })
}

fn verify_once(f: &FormulaSpec, ctx: &PrecisionContext) -> Result<VerifyReport> {
    let lhs = sum_series(f, ctx)?;
    let rhs = f.rhs.evaluate(ctx)?;
    let cap = ctx.target_digits() + ctx.guard_digits();
    let digits = digits_agreed(
        &BigComplex::from_real(lhs.value),
        &BigComplex::from_real(rhs),
        cap,
    )
    .min(ctx.working_digits());
    let target = ctx.target_digits();
    Ok(VerifyReport {
        matched: digits + 5 >= target,
        digits_agreed: digits.min(target),
        terms_used: lhs.terms_used,
        target_digits: target,
        guard_digits: ctx.guard_digits(),
    })
}
