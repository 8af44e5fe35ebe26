//! Translation of a theta-operator from the series side of a factorization
//! to its elliptic side, and rational recognition of the result.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{check_factorization, find_complementary_point, FactorCheck, FamilyId};
use crate::hyperseries::{DenomPattern, FormulaSpec};
use crate::numeric::{BigComplex, BigFloat, Jet, PrecisionContext, DEFAULT_JET_ORDER};
use crate::rational::{format_rational, Rational};

/// Denominator bound for continued-fraction recognition.
pub const RECOGNITION_DENOMINATOR_BOUND: u64 = 1_000_000;

/// p0 + p1 theta + p2 theta^2 + p3 theta^3, theta = y d/dy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThetaOperator {
    pub p: [i64; 4],
}

impl ThetaOperator {
    pub fn new(p0: i64, p1: i64, p2: i64, p3: i64) -> Self {
        Self { p: [p0, p1, p2, p3] }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 0)
    }

    /// The operator whose action on sum a_n y^n multiplies a_n by `poly(n)`.
    pub fn from_poly(poly: &[i64]) -> Result<Self> {
        if poly.len() > 4 && poly[4..].iter().any(|&c| c != 0) {
            return Err(Error::NotApplicable(
                "numerator polynomial has degree above 3".into(),
            ));
        }
        let mut p = [0i64; 4];
        for (i, &c) in poly.iter().take(4).enumerate() {
            p[i] = c;
        }
        Ok(Self { p })
    }

    pub fn eval(&self, n: i64) -> BigInt {
        self.p
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * n + c)
    }
}

/// Multiply the summand's numerator polynomial by the operator polynomial.
pub fn apply_theta_to_series(op: &ThetaOperator, base: &FormulaSpec) -> FormulaSpec {
    let mut out = vec![0i64; base.numerator_poly.len() + 3];
    for (i, &a) in base.numerator_poly.iter().enumerate() {
        for (j, &b) in op.p.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    base.with_poly(out)
}

/// The operator written in x: p0 G + p1 w G' + p2 w (w G')' + p3 w (w (w G')')',
/// w = y / y', evaluated at x0 through jets.
pub fn apply_theta_to_rhs(
    op: &ThetaOperator,
    family: &FamilyId,
    x0: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let order = DEFAULT_JET_ORDER;
    let x = Jet::variable(x0, order);
    let g = family.eval_rhs(&x, ctx)?;
    let y = family.y_map(&x)?;
    let w = y.truncate(order - 1).div_jet(&y.derivative()?)?;

    let mut level = g;
    let mut value = level.value().mul_i64(op.p[0]);
    for &pk in &op.p[1..] {
        let d = level.derivative()?;
        level = w.truncate(d.order()).mul_jet(&d);
        value = &value + &level.value().mul_i64(pk);
    }
    Ok(value)
}

/// A rational p/q with q <= bound and |v - p/q| < tol, found among the
/// continued-fraction convergents of v.
pub fn recognize_rational(v: &BigFloat, bound: u64, tol: &BigFloat) -> Option<Rational> {
    let p = v.prec();
    let bound = BigInt::from(bound);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = v.clone();
    for _ in 0..200 {
        let a = x.floor_to_bigint();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > bound {
            return None;
        }
        let approx = BigFloat::from_ratio(&h2, &k2, p);
        if (v - &approx).cmp_abs(tol).is_lt() {
            return Some(Rational::new(h2, k2));
        }
        let frac = &x - &BigFloat::from_bigint(&a, p);
        if frac.is_zero() {
            return None;
        }
        x = &BigFloat::one(p) / &frac;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proven,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub family: String,
    pub operator: ThetaOperator,
    pub x0: String,
    pub y0: String,
    /// Theta-operator image of the elliptic side at x0; its imaginary part
    /// has been checked to vanish to the recognition tolerance.
    pub operator_value: String,
    pub surd: u64,
    /// operator_value * pi / sqrt(surd), recognized as a rational.
    pub surd_ratio: String,
    pub predicted_rhs: String,
    pub recognized_at_digits: [u32; 2],
    pub factorization: FactorCheck,
    pub series_side_exact: bool,
    pub verdict: Verdict,
}

fn check_series_side(f: &FormulaSpec, family: &FamilyId, op: &ThetaOperator) -> bool {
    let (up, lo) = family.series_params();
    let same = |a: &[Rational], b: &[Rational]| {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort();
        b.sort();
        a == b
    };
    let base = f.with_poly(vec![1]);
    let image = apply_theta_to_series(op, &base);
    let mut poly = f.numerator_poly.clone();
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
    same(&up, &f.upper)
        && same(&lo, &f.lower)
        && family.y0().as_ref() == Some(&f.z)
        && image.numerator_poly == poly
}

/// The rational r with operator value r * sqrt(d) / pi at `ctx`'s precision.
fn surd_ratio_at(
    op: &ThetaOperator,
    family: &FamilyId,
    surd: u64,
    ctx: &PrecisionContext,
) -> Result<(BigComplex, BigFloat, BigComplex)> {
    let p = ctx.working_bits();
    let guess = family
        .initial_guess(p)
        .ok_or_else(|| Error::NotApplicable(format!("{family} has no complementary point")))?;
    let x0 = find_complementary_point(family, &guess, ctx)?;
    let v = apply_theta_to_rhs(op, family, &x0, ctx)?;
    let tol = BigFloat::pow10(-(ctx.target_digits() as i64) + 20, p);
    if v.im.cmp_abs(&tol).is_gt() {
        return Err(Error::RecognitionFailure {
            value: v.to_decimal(30),
            bound: RECOGNITION_DENOMINATOR_BOUND,
        });
    }
    let ratio = &(&v.re * ctx.pi()) / &BigFloat::from_i64(surd as i64, p).sqrt();
    Ok((x0, ratio, v))
}

fn recognize_at(
    op: &ThetaOperator,
    family: &FamilyId,
    surd: u64,
    ctx: &PrecisionContext,
) -> Result<(Rational, BigComplex, BigComplex)> {
    let (x0, ratio, v) = surd_ratio_at(op, family, surd, ctx)?;
    let tol = BigFloat::pow10(-(ctx.target_digits() as i64) + 20, ctx.working_bits());
    let r = recognize_rational(&ratio, RECOGNITION_DENOMINATOR_BOUND, &tol).ok_or_else(|| {
        Error::RecognitionFailure {
            value: ratio.to_decimal(40),
            bound: RECOGNITION_DENOMINATOR_BOUND,
        }
    })?;
    Ok((r, x0, v))
}

/// Translation proof of a polynomial-numerator formula from a family.
pub fn prove_formula(
    f: &FormulaSpec,
    family: &FamilyId,
    ctx: &PrecisionContext,
) -> Result<ProofReport> {
    prove_with_operator(f, family, &ThetaOperator::from_poly(&f.numerator_poly)?, ctx)
}

/// As `prove_formula`, with an explicitly supplied operator (which must
/// reproduce the formula's numerator for the verdict to be PROVEN).
pub fn prove_with_operator(
    f: &FormulaSpec,
    family: &FamilyId,
    op: &ThetaOperator,
    ctx: &PrecisionContext,
) -> Result<ProofReport> {
    if f.denom_pattern != DenomPattern::One {
        return Err(Error::NotApplicable(
            "translation needs a polynomial numerator; use an equivalence for 1/(2n+1) forms".into(),
        ));
    }
    if f.rhs.l_value.is_some() || f.rhs.pi_power != 1 {
        return Err(Error::NotApplicable(
            "right side is not of the form r sqrt(d)/pi".into(),
        ));
    }
    let factor_ctx = ctx.with_target(ctx.target_digits().min(60));
    let factorization = check_factorization(family, 3, &factor_ctx)?;
    let factor_ok = factorization.passes(factor_ctx.target_digits().saturating_sub(10));
    let series_side_exact = check_series_side(f, family, op);

    let surd = f.rhs.surd;
    let (r1, x0, v) = recognize_at(op, family, surd, ctx)?;
    let ctx2 = ctx.with_target(ctx.target_digits() + 50);
    let (r2, _, _) = recognize_at(op, family, surd, &ctx2)?;

    let predicted = &f.rhs.rat / &f.scale;
    let proven = r1 == r2 && r1 == predicted && factor_ok && series_side_exact;
    Ok(ProofReport {
        family: family.to_string(),
        operator: *op,
        x0: x0.to_decimal(40),
        y0: family.y0().map(|y| format_rational(&y)).unwrap_or_default(),
        operator_value: v.re.to_decimal(40),
        surd,
        surd_ratio: format_rational(&r1),
        predicted_rhs: format!("({})*sqrt({surd})/pi", format_rational(&predicted)),
        recognized_at_digits: [ctx.target_digits(), ctx2.target_digits()],
        factorization,
        series_side_exact,
        verdict: if proven { Verdict::Proven } else { Verdict::Mismatch },
    })
}

/// Operator value times pi / sqrt(surd), without recognition.
pub fn raw_surd_ratio(
    op: &ThetaOperator,
    family: &FamilyId,
    surd: u64,
    ctx: &PrecisionContext,
) -> Result<BigFloat> {
    surd_ratio_at(op, family, surd, ctx).map(|(_, r, _)| r)
}

/// |value - r| for the integer or rational r, as a float.
pub fn distance_to(value: &BigFloat, r: &Rational) -> BigFloat {
    let q = BigFloat::from_ratio(r.numer(), r.denom(), value.prec());
    (value - &q).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn continued_fraction_recognition() {
        let p = 300;
        let v = BigFloat::from_ratio_i64(98, 9, p);
        let tol = BigFloat::pow10(-60, p);
        assert_eq!(recognize_rational(&v, 1000, &tol), Some(rat(98, 9)));
        let pi = BigFloat::pi(p);
        assert_eq!(recognize_rational(&pi, 1_000_000, &tol), None);
    }

    #[test]
    fn operator_polynomial() {
        let op = ThetaOperator::new(90, 1428, -9216, 70688);
        assert_eq!(op.eval(1), BigInt::from(90 + 1428 - 9216 + 70688));
        assert!(ThetaOperator::from_poly(&[1, 2, 3, 4, 5]).is_err());
    }
}
