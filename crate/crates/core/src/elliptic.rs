//! Complete elliptic integrals for complex modulus via the
//! arithmetic-geometric mean.
//!
//! Functions taking `m` use the parameter m = k^2; the `k` variants take the
//! modulus. All of them work on scalars and on jets.

use crate::error::{Error, Result};
use crate::numeric::{Analytic, BigComplex, BigFloat, PrecisionContext};

fn max_agm_iterations(ctx: &PrecisionContext) -> usize {
    (4.0 * (ctx.working_digits() as f64).log2()).ceil() as usize + 40
}

/// Keep b unless the other root is strictly closer to a:
/// |a - b| <= |a + b| iff Re(a conj(b)) >= 0. Ties go to Re(b) >= 0.
fn needs_flip(a: &BigComplex, b: &BigComplex) -> bool {
    let dot = &(&a.re * &b.re) + &(&a.im * &b.im);
    if dot.is_zero() {
        b.re.is_negative()
    } else {
        dot.is_negative()
    }
}

/// Runs the AGM, calling `step(a_n, b_n, n)` before each update.
fn agm_with<T: Analytic>(
    a: &T,
    b: &T,
    ctx: &PrecisionContext,
    mut step: impl FnMut(&T, &T, usize),
) -> Result<T> {
    let eps = ctx.working_eps();
    let max_iter = max_agm_iterations(ctx);
    let (mut a, mut b) = (a.clone(), b.clone());
    for n in 0..max_iter {
        let gap = a.minus(&b).magnitude();
        if gap.cmp_abs(&(&eps * &a.magnitude())).is_le() {
            return Ok(a);
        }
        step(&a, &b, n);
        let a1 = a.plus(&b).mul_pow2(-1);
        let mut b1 = a.times(&b).sqrt()?;
        if needs_flip(a1.lead(), b1.lead()) {
            b1 = b1.negated();
        }
        a = a1;
        b = b1;
    }
    Err(Error::AgmNonConvergence(max_iter))
}

/// Arithmetic-geometric mean with the "right" choice of square root at each
/// step.
pub fn agm<T: Analytic>(a: &T, b: &T, ctx: &PrecisionContext) -> Result<T> {
    agm_with(a, b, ctx, |_, _, _| {})
}

fn check_modulus<T: Analytic>(m: &T, ctx: &PrecisionContext) -> Result<T> {
    let one_minus = m.rsub_i64(1);
    if one_minus
        .lead()
        .abs()
        .cmp_abs(&ctx.working_eps())
        .is_lt()
    {
        return Err(Error::SingularModulus);
    }
    Ok(one_minus)
}

/// K as a function of the parameter m: pi / (2 agm(1, sqrt(1 - m))).
pub fn ellip_k_param<T: Analytic>(m: &T, ctx: &PrecisionContext) -> Result<T> {
    let one_minus = check_modulus(m, ctx)?;
    let g = agm(&m.lift_i64(1), &one_minus.sqrt()?, ctx)?;
    let half_pi = m.lift(BigComplex::from_real(ctx.pi().mul_pow2(-1)));
    half_pi.over(&g)
}

/// K(k) = K_param(k^2).
pub fn ellip_k<T: Analytic>(k: &T, ctx: &PrecisionContext) -> Result<T> {
    ellip_k_param(&k.times(k), ctx)
}

/// E as a function of the parameter m, from the AGM companion sum
/// E = K (1 - sum_{n>=0} 2^(n-1) c_n^2), c_0^2 = m, c_{n+1} = (a_n - b_n)/2.
pub fn ellip_e_param(m: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let prec = ctx.working_bits();
    if m == &BigComplex::one(m.prec()) || m == &BigComplex::one(prec) {
        return Ok(BigComplex::one(prec));
    }
    let one_minus = check_modulus(m, ctx)?;
    let mut sum = m.mul_pow2(-1);
    let g = agm_with(
        &BigComplex::one(prec),
        &Analytic::sqrt(&one_minus)?,
        ctx,
        |a, b, n| {
            let c = (a - b).mul_pow2(-1);
            sum = &sum + &(&c * &c).mul_pow2(n as i64);
        },
    )?;
    let half_pi = BigComplex::from_real(ctx.pi().mul_pow2(-1));
    let k = half_pi.over(&g)?;
    Ok(&k * &sum.rsub_i64(1))
}

pub fn ellip_e(k: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    ellip_e_param(&(k * k), ctx)
}

/// -K(r)K(1-r) + K(r)E(1-r) + E(r)K(1-r) - pi/2, with r the parameter of
/// the first pair. Vanishes in the cut-plane region where principal K and E
/// are analytic continuations of the real ones.
pub fn legendre_defect(r0: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let r1 = r0.rsub_i64(1);
    let k0 = ellip_k_param(r0, ctx)?;
    let k1 = ellip_k_param(&r1, ctx)?;
    let e0 = ellip_e_param(r0, ctx)?;
    let e1 = ellip_e_param(&r1, ctx)?;
    let combo = &(&(&k0 * &e1) + &(&e0 * &k1)) - &(&k0 * &k1);
    Ok(&combo - &BigComplex::from_real(ctx.pi().mul_pow2(-1)))
}

/// A complete elliptic integral value tagged with its modulus.
#[derive(Debug, Clone)]
pub struct EllipticValue {
    pub k: BigComplex,
    pub value: BigComplex,
}

impl EllipticValue {
    pub fn first_kind(k: BigComplex, ctx: &PrecisionContext) -> Result<Self> {
        let value = ellip_k(&k, ctx)?;
        Ok(Self { k, value })
    }

    pub fn second_kind(k: BigComplex, ctx: &PrecisionContext) -> Result<Self> {
        let value = ellip_e(&k, ctx)?;
        Ok(Self { k, value })
    }

    pub fn is_real_positive(&self) -> bool {
        self.value.im.is_zero() && !self.value.re.is_negative() && !self.value.re.is_zero()
    }
}

/// sum_n (1/2)_n^2/(1)_n^2 x^n by direct summation; used as an oracle.
pub fn k_series(x: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    hyp_series_2f1_halves(x, ctx, 1)
}

/// sum_n (-1/2)_n (1/2)_n/(1)_n^2 x^n; (pi/2) times it is E(sqrt x).
pub fn e_series(x: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    hyp_series_2f1_halves(x, ctx, -1)
}

fn hyp_series_2f1_halves(x: &BigComplex, ctx: &PrecisionContext, a_twice: i64) -> BigComplex {
    let prec = ctx.working_bits();
    let eps = ctx.working_eps();
    let mut term = BigComplex::one(prec);
    let mut sum = term.clone();
    let mut n: i64 = 0;
    loop {
        // t_{n+1}/t_n = (n + a)(n + 1/2)/(n + 1)^2 x, a = a_twice/2
        let num = num_bigint::BigInt::from((2 * n + a_twice) * (2 * n + 1));
        let den = num_bigint::BigInt::from(4 * (n + 1) * (n + 1));
        term = (&term * x).mul_ratio(&num, &den);
        sum = &sum + &term;
        n += 1;
        if term.max_norm().cmp_abs(&eps).is_lt() && n > 2 {
            break;
        }
    }
    sum
}

/// Convenience: the real number pi/2 at working precision.
pub fn half_pi(ctx: &PrecisionContext) -> BigFloat {
    ctx.pi().mul_pow2(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Jet;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60)
    }

    fn c(re: f64, im: f64, ctx: &PrecisionContext) -> BigComplex {
        BigComplex::from_f64(re, im, ctx.working_bits())
    }

    fn agree(a: &BigComplex, b: &BigComplex, digits: f64) -> bool {
        let d = (a - b).abs();
        d.is_zero() || d.log10_abs() < -digits
    }

    #[test]
    fn agm_fixed_point() {
        let ctx = ctx();
        let one = BigComplex::one(ctx.working_bits());
        assert_eq!(agm(&one, &one, &ctx).unwrap(), one);
    }

    #[test]
    fn agm_lemniscatic() {
        let ctx = ctx();
        let p = ctx.working_bits();
        let r2 = BigComplex::from_real(BigFloat::from_i64(2, p).sqrt());
        let g = agm(&BigComplex::one(p), &r2, &ctx).unwrap();
        // independent oracle: the textbook real recurrence, no branch logic
        let (mut a, mut b) = (BigFloat::one(p), BigFloat::from_i64(2, p).sqrt());
        for _ in 0..12 {
            let a1 = (&a + &b).mul_pow2(-1);
            b = (&a * &b).sqrt();
            a = a1;
        }
        assert!(agree(&g, &BigComplex::from_real(a), 80.0));
        assert_eq!(
            g.re.to_decimal(50),
            "1.1981402347355922074399224922803238782272126632157e0"
        );
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        let ctx = ctx();
        let k = ellip_k(&BigComplex::zero(ctx.working_bits()), &ctx).unwrap();
        assert_eq!(k, BigComplex::from_real(half_pi(&ctx)));
    }

    #[test]
    fn k_and_e_at_one_over_root_two() {
        let ctx = ctx();
        let p = ctx.working_bits();
        let half = BigComplex::from_ratio_i64(1, 2, p);
        let k = ellip_k_param(&half, &ctx).unwrap();
        assert_eq!(
            k.re.to_decimal(40),
            "1.854074677301371918433850347195260046218e0"
        );
        let oracle = k_series(&half, &ctx).scale(&half_pi(&ctx));
        assert!(agree(&k, &oracle, 80.0));
        let e = ellip_e_param(&half, &ctx).unwrap();
        let oracle = e_series(&half, &ctx).scale(&half_pi(&ctx));
        assert!(agree(&e, &oracle, 80.0));
    }

    #[test]
    fn k_matches_series_at_one_tenth() {
        let ctx = ctx();
        let x = BigComplex::from_ratio_i64(1, 10, ctx.working_bits());
        let lhs = ellip_k(&Analytic::sqrt(&x).unwrap(), &ctx)
            .unwrap()
            .scale(&(&BigFloat::from_i64(2, ctx.working_bits()) / ctx.pi()));
        assert!(agree(&lhs, &k_series(&x, &ctx), 60.0));
    }

    #[test]
    fn e_endpoints() {
        let ctx = ctx();
        let p = ctx.working_bits();
        assert!(agree(
            &ellip_e(&BigComplex::zero(p), &ctx).unwrap(),
            &BigComplex::from_real(half_pi(&ctx)),
            80.0
        ));
        assert_eq!(ellip_e(&BigComplex::one(p), &ctx).unwrap(), BigComplex::one(p));
    }

    #[test]
    fn singular_modulus() {
        let ctx = ctx();
        let one = BigComplex::one(ctx.working_bits());
        assert!(matches!(ellip_k(&one, &ctx), Err(Error::SingularModulus)));
        assert!(matches!(
            legendre_defect(&BigComplex::zero(ctx.working_bits()), &ctx),
            Err(Error::SingularModulus)
        ));
        assert!(matches!(legendre_defect(&one, &ctx), Err(Error::SingularModulus)));
    }

    #[test]
    fn legendre_at_complex_point() {
        let ctx = ctx();
        let p = ctx.working_bits();
        let r0 = BigComplex::new(
            BigFloat::from_ratio_i64(1, 2, p),
            &BigFloat::from_i64(3, p).sqrt() / &BigFloat::from_i64(6, p),
        );
        let d = legendre_defect(&r0, &ctx).unwrap();
        assert!(d.abs().is_zero() || d.abs().log10_abs() < -60.0);
        let k = ellip_k_param(&r0, &ctx).unwrap();
        assert_eq!(
            k.to_decimal(30),
            "1.78781570585728446271369293930e0 + 2.19048234435594115672195246177e-1i"
        );
    }

    #[test]
    fn positive_real_values() {
        let ctx = ctx();
        let v = EllipticValue::first_kind(c(0.3, 0.0, &ctx), &ctx).unwrap();
        assert!(v.is_real_positive());
    }

    #[test]
    fn order_zero_jet_matches_scalar_bitwise() {
        let ctx = ctx();
        let x = c(0.3, 0.2, &ctx);
        let j = Jet::variable(&x, 0);
        let kj = ellip_k(&j, &ctx).unwrap();
        let ks = ellip_k(&x, &ctx).unwrap();
        assert_eq!(kj.value(), &ks);
    }
}
