use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lvalue::dirichlet_l;
use crate::error::{Error, Result};
use crate::numeric::{BigFloat, PrecisionContext};
use crate::rational::{self, abs_lt_one, Rational};

/// The rational factor of n dividing the polynomial numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DenomPattern {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2n+1")]
    TwoNPlusOne,
    #[serde(rename = "n^3")]
    NCubed,
    #[serde(rename = "(1-2n)n^3")]
    OneMinusTwoNTimesNCubed,
}

impl DenomPattern {
    pub fn eval(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        match self {
            Self::One => BigInt::from(1),
            Self::TwoNPlusOne => &n * 2 + 1,
            Self::NCubed => &n * &n * &n,
            Self::OneMinusTwoNTimesNCubed => (1 - &n * 2) * &n * &n * &n,
        }
    }

    /// Ascending integer coefficients.
    pub fn coefficients(&self) -> Vec<i64> {
        match self {
            Self::One => vec![1],
            Self::TwoNPlusOne => vec![1, 2],
            Self::NCubed => vec![0, 0, 0, 1],
            Self::OneMinusTwoNTimesNCubed => vec![0, 0, 0, 1, -2],
        }
    }

    /// Smallest summation index at which the pattern is nonzero from then on.
    pub fn min_start(&self) -> u32 {
        match self {
            Self::One | Self::TwoNPlusOne => 0,
            Self::NCubed | Self::OneMinusTwoNTimesNCubed => 1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "one" => Ok(Self::One),
            "2n+1" => Ok(Self::TwoNPlusOne),
            "n^3" => Ok(Self::NCubed),
            "(1-2n)n^3" => Ok(Self::OneMinusTwoNTimesNCubed),
            other => Err(Error::Parse(format!("unknown denominator pattern `{other}`"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::One => "1",
            Self::TwoNPlusOne => "2n+1",
            Self::NCubed => "n^3",
            Self::OneMinusTwoNTimesNCubed => "(1-2n)n^3",
        }
    }
}

/// `coefficient * L_D(s) + shift`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LValueTerm {
    pub discriminant: i64,
    pub s: u32,
    #[serde(with = "rational::as_string")]
    pub coefficient: Rational,
    #[serde(with = "rational::as_string")]
    pub shift: Rational,
}

/// A closed-form constant `rat * sqrt(surd) * pi^(-pi_power)`, plus an
/// optional Dirichlet L-value term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicConstant {
    #[serde(with = "rational::as_string")]
    pub rat: Rational,
    pub surd: u64,
    pub pi_power: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_value: Option<LValueTerm>,
}

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Split d = s^2 * f with f squarefree; returns (s, f).
pub fn square_part(d: &BigInt) -> (BigInt, BigInt) {
    assert!(d.is_positive(), "square_part of a nonpositive integer");
    let mut rest = d.clone();
    let mut outside = BigInt::from(1);
    let mut inside = BigInt::from(1);
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            outside *= &p;
        }
        if count % 2 == 1 {
            inside *= &p;
        }
        p += 1;
    }
    (outside, inside * rest)
}

impl AlgebraicConstant {
    /// rat * sqrt(surd) / pi^pi_power.
    pub fn surd_over_pi(rat: Rational, surd: u64, pi_power: i32) -> Self {
        Self {
            rat,
            surd,
            pi_power,
            l_value: None,
        }
    }

    /// coefficient * L_{-7}(2) + shift.
    pub fn l_minus7(coefficient: Rational, shift: Rational) -> Self {
        Self {
            rat: Rational::zero(),
            surd: 1,
            pi_power: 0,
            l_value: Some(LValueTerm {
                discriminant: -7,
                s: 2,
                coefficient,
                shift,
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_squarefree(self.surd) {
            return Err(Error::InvalidFormula(format!(
                "surd {} is not squarefree",
                self.surd
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, ctx: &PrecisionContext) -> Result<BigFloat> {
        let p = ctx.working_bits();
        let mut v = BigFloat::from_ratio(self.rat.numer(), self.rat.denom(), p);
        if self.surd != 1 && !v.is_zero() {
            v = &v * &BigFloat::from_i64(self.surd as i64, p).sqrt();
        }
        if self.pi_power != 0 && !v.is_zero() {
            v = &v * &ctx.pi().powi(-(self.pi_power as i64));
        }
        if let Some(l) = &self.l_value {
            let lv = dirichlet_l(l.discriminant, l.s, ctx)?;
            let coef = BigFloat::from_ratio(l.coefficient.numer(), l.coefficient.denom(), p);
            let shift = BigFloat::from_ratio(l.shift.numer(), l.shift.denom(), p);
            v = &(&v + &(&coef * &lv)) + &shift;
        }
        Ok(v)
    }

    pub fn describe(&self) -> String {
        if let Some(l) = &self.l_value {
            let mut s = format!(
                "{}*L_{}({})",
                rational::format_rational(&l.coefficient),
                l.discriminant,
                l.s
            );
            if !l.shift.is_zero() {
                s.push_str(&format!(" + {}", rational::format_rational(&l.shift)));
            }
            return s;
        }
        let mut s = format!("({})", rational::format_rational(&self.rat));
        if self.surd != 1 {
            s.push_str(&format!("*sqrt({})", self.surd));
        }
        match self.pi_power {
            0 => {}
            1 => s.push_str("/pi"),
            e => s.push_str(&format!("/pi^{e}")),
        }
        s
    }
}

/// A Ramanujan-Orr type series
///
/// sum_{n >= start} scale * prod (u)_n / prod (l)_n * z^n * P(n) / D(n) = rhs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSpec {
    #[serde(with = "rational::vec_as_string")]
    pub upper: Vec<Rational>,
    #[serde(with = "rational::vec_as_string")]
    pub lower: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub z: Rational,
    /// Ascending integer coefficients of P(n).
    pub numerator_poly: Vec<i64>,
    #[serde(with = "rational::as_string")]
    pub scale: Rational,
    pub denom_pattern: DenomPattern,
    pub rhs: AlgebraicConstant,
    pub convergent: bool,
    pub start_index: u32,
}

impl FormulaSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFormula(m));
        if self.upper.len() != self.lower.len() {
            return bad(format!(
                "{} upper parameters but {} lower; the term ratio must have equal degrees",
                self.upper.len(),
                self.lower.len()
            ));
        }
        if self.convergent != abs_lt_one(&self.z) {
            return bad(format!(
                "convergent = {} contradicts |z| = |{}|",
                self.convergent,
                rational::format_rational(&self.z)
            ));
        }
        if self.start_index < self.denom_pattern.min_start() {
            return bad(format!(
                "denominator {} vanishes at n = 0",
                self.denom_pattern.label()
            ));
        }
        if self.start_index > 1 {
            return bad("start_index must be 0 or 1".into());
        }
        for l in &self.lower {
            if l.is_integer() && !l.is_positive() {
                return bad(format!(
                    "lower parameter {} makes a Pochhammer symbol vanish",
                    rational::format_rational(l)
                ));
            }
        }
        if self.numerator_poly.is_empty() || self.scale.is_zero() {
            return bad("empty numerator".into());
        }
        self.rhs.validate()
    }

    pub fn poly_degree(&self) -> usize {
        self.numerator_poly
            .iter()
            .rposition(|&c| c != 0)
            .unwrap_or(0)
    }

    pub fn eval_poly(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        self.numerator_poly
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * &n + c)
    }

    /// The same series with a different numerator polynomial.
    pub fn with_poly(&self, poly: Vec<i64>) -> Self {
        Self {
            numerator_poly: poly,
            ..self.clone()
        }
    }

    /// |z| as f64.
    pub fn z_abs(&self) -> f64 {
        (self.z.numer().to_f64().unwrap_or(f64::INFINITY)
            / self.z.denom().to_f64().unwrap_or(f64::INFINITY))
        .abs()
    }
}
