//! Orr-type factorizations of a 4F3 series into products of two 2F1 or
//! K factors, and their complementary points.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elliptic::ellip_k_param;
use crate::error::{Error, Result};
use crate::hyperseries::sum_hypergeometric;
use crate::numeric::{Analytic, BigComplex, BigFloat, Jet, PrecisionContext, DEFAULT_JET_ORDER};
use crate::rational::{format_rational, parse_rational, rat, Rational};

const NEWTON_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyId {
    /// The factorization in the variable y itself, for parameter s.
    Generic(Rational),
    /// y = -4x^2(x-1)^2/(2x-1)^2, product f(x) f(x/(2x-1)).
    Fam1,
    /// y = -4x^2/(x^2-1)^2, K moduli from g = sqrt(1/2 - sqrt(1-x)/2).
    Fam2,
    /// y = -4x^2/(x^2-1)^2, K moduli from g = 1/2 - sqrt(1-x)/2.
    Fam3,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Generic(s) => write!(f, "generic:{}", format_rational(s)),
            Self::Fam1 => f.write_str("fam1"),
            Self::Fam2 => f.write_str("fam2"),
            Self::Fam3 => f.write_str("fam3"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fam1" => Ok(Self::Fam1),
            "fam2" => Ok(Self::Fam2),
            "fam3" => Ok(Self::Fam3),
            other => match other.strip_prefix("generic:") {
                Some(p) => Ok(Self::Generic(parse_rational(p)?)),
                None => Err(Error::Parse(format!("unknown family `{s}`"))),
            },
        }
    }
}

fn pi_as<T: Analytic>(x: &T, ctx: &PrecisionContext) -> T {
    x.lift(BigComplex::from_real(ctx.pi().clone()))
}

impl FamilyId {
    /// Upper and lower parameters of the 4F3 side.
    pub fn series_params(&self) -> (Vec<Rational>, Vec<Rational>) {
        let s = match self {
            Self::Generic(s) => s.clone(),
            _ => rat(1, 4),
        };
        let one = rat(1, 1);
        let half = rat(1, 2);
        let upper = vec![
            &s * &half,
            (&one - &s) * &half,
            (&one + &s) * &half,
            &one - &s * &half,
        ];
        (upper, vec![half, one.clone(), one.clone(), one])
    }

    pub fn y_map<T: Analytic>(&self, x: &T) -> Result<T> {
        match self {
            Self::Generic(_) => Ok(x.clone()),
            Self::Fam1 => {
                // -4 x^2 (x-1)^2 / (2x-1)^2
                let xm1 = x.plus_i64(-1);
                let num = x.times(x).times(&xm1).times(&xm1).mul_pow2(2).negated();
                let d = x.mul_pow2(1).plus_i64(-1);
                num.over(&d.times(&d))
            }
            Self::Fam2 | Self::Fam3 => {
                let d = x.times(x).plus_i64(-1);
                x.times(x).mul_pow2(2).negated().over(&d.times(&d))
            }
        }
    }

    /// Parameters m1, m2 (squared moduli) of the two K factors; None for
    /// the generic family, whose factors are plain 2F1 series.
    pub fn moduli<T: Analytic>(&self, x: &T) -> Result<Option<(T, T)>> {
        Ok(match self {
            Self::Generic(_) => None,
            Self::Fam1 => {
                let r = |t: &T| -> Result<T> {
                    let st = t.sqrt()?;
                    st.mul_pow2(1).over(&st.plus_i64(1))
                };
                let xp = x.over(&x.mul_pow2(1).plus_i64(-1))?;
                Some((r(x)?, r(&xp)?))
            }
            Self::Fam2 => {
                let g = fam2_g(x)?;
                let g1 = g.plus_i64(1);
                let m1 = g.mul_pow2(2).over(&g1.times(&g1))?;
                Some((m1, h_modulus(x)?))
            }
            Self::Fam3 => Some((fam3_g(x)?, h_modulus(x)?)),
        })
    }

    /// Right side: prefactor times the two factors.
    pub fn eval_rhs<T: Analytic>(&self, x: &T, ctx: &PrecisionContext) -> Result<T> {
        match self {
            Self::Generic(s) => {
                let y = x;
                let sq = y.rsub_i64(1).sqrt()?;
                let t = y.negated().sqrt()?;
                let base = sq.rsub_i64(1);
                let a_plus = base.plus(&t).mul_pow2(-1);
                let a_minus = base.minus(&t).mul_pow2(-1);
                let one = rat(1, 1);
                let up = vec![s.clone(), &one - s];
                let lo = vec![one.clone(), one];
                let f1 = sum_hypergeometric(&up, &lo, &a_plus, ctx)?;
                let f2 = sum_hypergeometric(&up, &lo, &a_minus, ctx)?;
                Ok(f1.times(&f2))
            }
            Self::Fam1 => {
                let f = |t: &T| -> Result<T> {
                    let st = t.sqrt()?;
                    let st1 = st.plus_i64(1);
                    let m = st.mul_pow2(1).over(&st1)?;
                    let k = ellip_k_param(&m, ctx)?;
                    k.mul_pow2(1).over(&pi_as(t, ctx).times(&st1.sqrt()?))
                };
                let xp = x.over(&x.mul_pow2(1).plus_i64(-1))?;
                Ok(f(x)?.times(&f(&xp)?))
            }
            Self::Fam2 | Self::Fam3 => {
                let (m1, m2) = self.moduli(x)?.expect("K family");
                let k1 = ellip_k_param(&m1, ctx)?;
                let k2 = ellip_k_param(&m2, ctx)?;
                Ok(self.prefactor(x, ctx)?.times(&k1).times(&k2))
            }
        }
    }

    /// Algebraic multiplier of the K product, including 4/pi^2. For the
    /// generic family the multiplier is 1.
    pub fn prefactor<T: Analytic>(&self, x: &T, ctx: &PrecisionContext) -> Result<T> {
        let pi = pi_as(x, ctx);
        let four_over_pi2 = x.lift_i64(4).over(&pi.times(&pi))?;
        match self {
            Self::Generic(_) => Ok(x.lift_i64(1)),
            Self::Fam1 => {
                let d = |t: &T| -> Result<T> { t.sqrt()?.plus_i64(1).sqrt() };
                let xp = x.over(&x.mul_pow2(1).plus_i64(-1))?;
                four_over_pi2.over(&d(x)?.times(&d(&xp)?))
            }
            Self::Fam2 => {
                let q = x.rsub_i64(1).root(4)?;
                let g1 = fam2_g(x)?.plus_i64(1);
                let h1 = x.over(&x.plus_i64(1))?.sqrt()?.plus_i64(1).sqrt()?;
                four_over_pi2.times(&q).over(&g1.times(&h1))
            }
            Self::Fam3 => {
                let q = x.rsub_i64(1).root(4)?;
                let h1 = x.over(&x.plus_i64(1))?.sqrt()?.plus_i64(1).sqrt()?;
                four_over_pi2.times(&q).over(&h1)
            }
        }
    }

    /// Left side: the 4F3 series at y = y_map(x).
    pub fn eval_lhs<T: Analytic>(&self, x: &T, ctx: &PrecisionContext) -> Result<T> {
        let y = self.y_map(x)?;
        let (up, lo) = self.series_params();
        sum_hypergeometric(&up, &lo, &y, ctx)
    }

    /// The complementary point in closed form, where one is known.
    pub fn x0_closed_form(&self, ctx: &PrecisionContext) -> Option<BigComplex> {
        let p = ctx.working_bits();
        let sqrt_of = |v: i64| BigFloat::from_i64(v, p).sqrt();
        match self {
            Self::Generic(_) => None,
            // (1 + 4 sqrt(3) i) / 49
            Self::Fam1 => Some(BigComplex::new(
                BigFloat::from_ratio_i64(1, 49, p),
                sqrt_of(3).mul_i64(4).div_i64(49),
            )),
            // (85 sqrt(41) - 529) / 128
            Self::Fam2 => Some(BigComplex::from_real(
                (sqrt_of(41).mul_i64(85) - BigFloat::from_i64(529, p)).mul_pow2(-7),
            )),
            // (sqrt(18785) - 49) / 128, the positive root of 64x^2 + 49x - 64
            Self::Fam3 => Some(BigComplex::from_real(
                (sqrt_of(18785) - BigFloat::from_i64(49, p)).mul_pow2(-7),
            )),
        }
    }

    /// y at the complementary point, exactly.
    pub fn y0(&self) -> Option<Rational> {
        match self {
            Self::Generic(_) => None,
            Self::Fam1 => Some(rat(192, 2401)),
            Self::Fam2 => Some(rat(-16384, 279841)),
            Self::Fam3 => Some(rat(-16384, 2401)),
        }
    }

    /// A starting point inside Newton's basin for the complementary point.
    pub fn initial_guess(&self, prec: u32) -> Option<BigComplex> {
        match self {
            Self::Generic(_) => None,
            Self::Fam1 => Some(BigComplex::from_f64(0.02, 0.14, prec)),
            Self::Fam2 => Some(BigComplex::from_f64(0.1, 0.0, prec)),
            Self::Fam3 => Some(BigComplex::from_f64(0.7, 0.0, prec)),
        }
    }

    /// A real interval on which both sides are sampled.
    pub fn sample_domain(&self) -> (f64, f64) {
        match self {
            Self::Generic(_) => (0.0, 0.5),
            Self::Fam1 => (0.0, 0.05),
            Self::Fam2 | Self::Fam3 => (0.0, 0.3),
        }
    }

    /// Expansion point for the jet comparison.
    pub fn interior_point(&self, prec: u32) -> BigComplex {
        match self {
            Self::Fam1 => BigComplex::from_ratio_i64(1, 100, prec),
            _ => BigComplex::from_ratio_i64(1, 10, prec),
        }
    }
}

fn fam2_g<T: Analytic>(x: &T) -> Result<T> {
    fam3_g(x)?.sqrt()
}

fn fam3_g<T: Analytic>(x: &T) -> Result<T> {
    Ok(x.rsub_i64(1).sqrt()?.rsub_i64(1).mul_pow2(-1))
}

/// 2h/(1+h), h = sqrt(x/(x+1)).
fn h_modulus<T: Analytic>(x: &T) -> Result<T> {
    let h = x.over(&x.plus_i64(1))?.sqrt()?;
    h.mul_pow2(1).over(&h.plus_i64(1))
}

/// Newton's method on m1(x) + m2(x) - 1 with first-order jets.
pub fn find_complementary_point(
    family: &FamilyId,
    initial_guess: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let p = ctx.working_bits();
    let mut x = BigComplex::new(initial_guess.re.with_prec(p), initial_guess.im.with_prec(p));
    let tol = ctx.working_eps().mul_i64(1 << 20);
    for _ in 0..NEWTON_MAX_ITER {
        let j = Jet::variable(&x, 1);
        let (m1, m2) = family
            .moduli(&j)?
            .ok_or_else(|| Error::NotApplicable(format!("{family} has no K moduli")))?;
        let f = m1.plus(&m2).plus_i64(-1);
        let step = f
            .coeff(0)
            .checked_div(f.coeff(1))
            .ok_or(Error::NewtonNonConvergence(0))?;
        x = &x - &step;
        if step.max_norm().cmp_abs(&tol.mul_pow2(x.max_norm().top_exponent().unwrap_or(0).max(0))).is_lt() {
            let (m1, m2) = family.moduli(&x)?.expect("K family");
            let defect = (&(&m1 + &m2) - &BigComplex::one(p)).max_norm();
            if defect.cmp_abs(&ctx.target_eps()).is_lt() {
                return Ok(x);
            }
        }
    }
    Err(Error::NewtonNonConvergence(NEWTON_MAX_ITER))
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorCheck {
    pub family: String,
    pub samples: usize,
    /// max |lhs - rhs| over the sample points.
    #[serde(serialize_with = "ser_float")]
    pub max_deviation: BigFloat,
    /// max over coefficients of |lhs_i - rhs_i| for the order-6 jets at the
    /// interior point.
    #[serde(serialize_with = "ser_float")]
    pub jet_deviation: BigFloat,
    pub jet_order: usize,
}

fn ser_float<S: serde::Serializer>(v: &BigFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal(6))
}

impl FactorCheck {
    /// Both deviations below 10^(-digits).
    pub fn passes(&self, digits: u32) -> bool {
        let eps = BigFloat::pow10(-(digits as i64), 64);
        self.max_deviation.cmp_abs(&eps).is_lt() && self.jet_deviation.cmp_abs(&eps).is_lt()
    }
}

/// Random sample points of the family's domain; complex points in the disk
/// |y| < 1/2 for the generic family, reals in the stated interval otherwise.
pub fn sample_points(family: &FamilyId, count: usize, seed: u64, prec: u32) -> Vec<BigComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = family.sample_domain();
    (0..count)
        .map(|_| match family {
            FamilyId::Generic(_) => {
                let r = hi * rng.gen::<f64>().sqrt();
                let t = std::f64::consts::TAU * rng.gen::<f64>();
                BigComplex::from_f64(r * t.cos(), r * t.sin(), prec)
            }
            _ => BigComplex::from_f64(rng.gen_range(lo..hi), 0.0, prec),
        })
        .collect()
}

/// Value agreement at random points and jet agreement at one interior point.
pub fn check_factorization(
    family: &FamilyId,
    sample_count: usize,
    ctx: &PrecisionContext,
) -> Result<FactorCheck> {
    check_factorization_seeded(family, sample_count, 0x5eed, ctx)
}

pub fn check_factorization_seeded(
    family: &FamilyId,
    sample_count: usize,
    seed: u64,
    ctx: &PrecisionContext,
) -> Result<FactorCheck> {
    let p = ctx.working_bits();
    let mut max_dev = BigFloat::zero(p);
    for x in sample_points(family, sample_count, seed, p) {
        let d = deviation_at(family, &x, ctx)?;
        if d.cmp_abs(&max_dev).is_gt() {
            max_dev = d;
        }
    }
    let base = family.interior_point(p);
    let j = Jet::variable(&base, DEFAULT_JET_ORDER);
    let lhs = family.eval_lhs(&j, ctx)?;
    let rhs = family.eval_rhs(&j, ctx)?;
    let jet_dev = (&lhs - &rhs).magnitude();
    Ok(FactorCheck {
        family: family.to_string(),
        samples: sample_count,
        max_deviation: max_dev,
        jet_deviation: jet_dev,
        jet_order: DEFAULT_JET_ORDER,
    })
}

/// |lhs(x) - rhs(x)|.
pub fn deviation_at(family: &FamilyId, x: &BigComplex, ctx: &PrecisionContext) -> Result<BigFloat> {
    let lhs = family.eval_lhs(x, ctx)?;
    let rhs = family.eval_rhs(x, ctx)?;
    Ok((&lhs - &rhs).abs())
}

/// Largest |lhs - rhs| along the straight path t * x1, t = 1/steps .. 1,
/// skipping points where the series side diverges.
pub fn check_path(
    family: &FamilyId,
    x1: &BigComplex,
    steps: u32,
    ctx: &PrecisionContext,
) -> Result<BigFloat> {
    let mut worst = BigFloat::zero(ctx.working_bits());
    for k in 1..=steps {
        let x = x1.mul_ratio(&k.into(), &steps.into());
        match deviation_at(family, &x, ctx) {
            Ok(d) => {
                if d.cmp_abs(&worst).is_gt() {
                    worst = d;
                }
            }
            Err(Error::DivergentSeries) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}
