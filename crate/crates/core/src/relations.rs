//! Integer relations (PSLQ) and the discovery pipeline: t(j) moments, a
//! quadratic-form relation with 1/pi^2, and its square root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperseries::{
    square_part, verify_formula, AlgebraicConstant, DenomPattern, FormulaSpec, VerifyReport,
};
use crate::numeric::{BigFloat, PrecisionContext};
use crate::rational::{abs_lt_one, Rational};

const MAX_PSLQ_ITER: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct RelationResult {
    #[serde(serialize_with = "ser_ints")]
    pub coefficients: Vec<BigInt>,
    #[serde(serialize_with = "ser_float")]
    pub residual: BigFloat,
    /// No relation of smaller Euclidean norm exists.
    #[serde(serialize_with = "ser_float")]
    pub norm_bound: BigFloat,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PslqOutcome {
    Found(RelationResult),
    /// Every integer relation has norm at least `norm_bound`.
    NoneBelow {
        #[serde(serialize_with = "ser_float")]
        norm_bound: BigFloat,
    },
}

impl PslqOutcome {
    pub fn relation(&self) -> Option<&RelationResult> {
        match self {
            Self::Found(r) => Some(r),
            Self::NoneBelow { .. } => None,
        }
    }
}

fn ser_float<S: serde::Serializer>(v: &BigFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal(6))
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn float_of(v: &BigInt, p: u32) -> BigFloat {
    BigFloat::from_bigint(v, p)
}

/// sum c_i v_i.
pub fn dot(c: &[BigInt], v: &[BigFloat]) -> BigFloat {
    let p = v[0].prec();
    c.iter()
        .zip(v)
        .fold(BigFloat::zero(p), |acc, (ci, vi)| &acc + &(vi * &float_of(ci, p)))
}

/// Divide out the content and make the first nonzero entry positive.
pub fn normalize_relation(c: &[BigInt]) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return c.to_vec();
    }
    let sign = match c.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    c.iter().map(|x| x / &g * &sign).collect()
}

/// Whether `c` is a relation for `v` to 10^-(target - 10), relative to
/// max |v_i|.
pub fn passes_residual(c: &[BigInt], v: &[BigFloat], ctx: &PrecisionContext) -> bool {
    if c.iter().all(Zero::is_zero) {
        return false;
    }
    let vmax = v.iter().fold(BigFloat::zero(v[0].prec()), |m, x| {
        if x.cmp_abs(&m).is_gt() { x.abs() } else { m }
    });
    let tol = &vmax * &BigFloat::pow10(-(ctx.target_digits() as i64 - 10), vmax.prec());
    dot(c, v).cmp_abs(&tol).is_lt()
}

/// PSLQ with gamma = 2/sqrt(3) and full Hermite reduction.
pub fn pslq(values: &[BigFloat], ctx: &PrecisionContext, max_coeff: &BigInt) -> Result<PslqOutcome> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidFormula("PSLQ needs at least two values".into()));
    }
    let p = ctx.working_bits();
    if values.iter().any(BigFloat::is_zero) {
        return Err(Error::InvalidFormula("PSLQ input contains a zero".into()));
    }
    let x: Vec<BigFloat> = values.iter().map(|v| v.with_prec(p)).collect();
    let zero = BigFloat::zero(p);
    // gamma^2 = 4/3; compare gamma^i |H_ii| via squares
    let gamma = BigFloat::from_ratio_i64(4, 3, p).sqrt();

    let norm = x.iter().fold(zero.clone(), |a, v| &a + &(v * v)).sqrt();
    let mut y: Vec<BigFloat> = x.iter().map(|v| v / &norm).collect();
    let mut s = vec![zero.clone(); n];
    {
        let mut acc = zero.clone();
        for k in (0..n).rev() {
            acc = &acc + &(&y[k] * &y[k]);
            s[k] = acc.sqrt();
        }
    }
    let mut h = vec![vec![zero.clone(); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            h[i][j] = if i == j {
                &s[j + 1] / &s[j]
            } else {
                -(&(&y[i] * &y[j]) / &(&s[j] * &s[j + 1]))
            };
        }
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut b = a.clone();

    let reduce_row = |i: usize, jmax: usize, h: &mut Vec<Vec<BigFloat>>, y: &mut Vec<BigFloat>,
                      a: &mut Vec<Vec<BigInt>>, b: &mut Vec<Vec<BigInt>>| {
        for j in (0..=jmax).rev() {
            if h[j][j].is_zero() {
                continue;
            }
            let t = (&h[i][j] / &h[j][j]).round_to_bigint();
            if t.is_zero() {
                continue;
            }
            let tf = float_of(&t, p);
            y[j] = &y[j] + &(&tf * &y[i]);
            for k in 0..=j {
                h[i][k] = &h[i][k] - &(&tf * &h[j][k]);
            }
            for k in 0..n {
                a[i][k] = &a[i][k] - &t * &a[j][k];
                b[k][j] = &b[k][j] + &t * &b[k][i];
            }
        }
    };

    for i in 1..n {
        reduce_row(i, i - 1, &mut h, &mut y, &mut a, &mut b);
    }

    let threshold = BigFloat::pow10(-(ctx.target_digits() as i64 - 10), p);
    let coeff_limit = BigFloat::pow10((ctx.working_digits() as i64 - ctx.guard_digits() as i64 / 2).max(10), p);
    let max_coeff_f = float_of(max_coeff, p);

    for _ in 0..MAX_PSLQ_ITER {
        // 1. pick m maximizing gamma^i |H_ii|
        let mut m = 0;
        let mut best = zero.clone();
        let mut g = BigFloat::one(p);
        for i in 0..n - 1 {
            g = &g * &gamma;
            let v = (&g * &h[i][i]).abs();
            if v.cmp_abs(&best).is_gt() {
                best = v;
                m = i;
            }
        }
        // 2. swap
        y.swap(m, m + 1);
        a.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        // 3. corner
        if m < n - 2 {
            let t0 = (&(&h[m][m] * &h[m][m]) + &(&h[m][m + 1] * &h[m][m + 1])).sqrt();
            let t1 = &h[m][m] / &t0;
            let t2 = &h[m][m + 1] / &t0;
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = &(&t1 * &t3) + &(&t2 * &t4);
                row[m + 1] = &(&t1 * &t4) - &(&t2 * &t3);
            }
        }
        // 4. reduce
        for i in m + 1..n {
            reduce_row(i, (i - 1).min(m + 1), &mut h, &mut y, &mut a, &mut b);
        }
        // 5. relation?
        let mut bound_den = zero.clone();
        for (i, row) in h.iter().enumerate().take(n - 1) {
            if row[i].cmp_abs(&bound_den).is_gt() {
                bound_den = row[i].abs();
            }
        }
        let norm_bound = if bound_den.is_zero() {
            zero.clone()
        } else {
            &BigFloat::one(p) / &bound_den
        };
        let mut best_j = None;
        let mut best_y = None::<BigFloat>;
        for (j, yj) in y.iter().enumerate() {
            if yj.cmp_abs(&threshold).is_lt() && best_y.as_ref().is_none_or(|b| yj.cmp_abs(b).is_lt()) {
                best_j = Some(j);
                best_y = Some(yj.abs());
            }
        }
        if let Some(j) = best_j {
            let col: Vec<BigInt> = b.iter().map(|row| row[j].clone()).collect();
            if passes_residual(&col, &x, ctx) {
                let coefficients = normalize_relation(&col);
                let residual = dot(&coefficients, &x).abs();
                return Ok(PslqOutcome::Found(RelationResult {
                    coefficients,
                    residual,
                    norm_bound,
                }));
            }
        }
        if norm_bound.cmp_abs(&max_coeff_f).is_gt() {
            return Ok(PslqOutcome::NoneBelow { norm_bound });
        }
        let amax = a
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_default();
        if float_of(&amax, p).cmp_abs(&coeff_limit).is_gt() {
            return Err(Error::PrecisionExhausted(format!(
                "PSLQ matrix entries exceed the working precision (norm bound {})",
                norm_bound.to_decimal(6)
            )));
        }
    }
    Err(Error::PrecisionExhausted("PSLQ iteration limit".into()))
}

/// t(j) = sum_n prod (u)_n / prod (l)_n y0^n n^j / D(n), j = 0..=j_max.
pub fn compute_t_basis(
    upper: &[Rational],
    lower: &[Rational],
    y0: &Rational,
    pattern: DenomPattern,
    j_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<BigFloat>> {
    if !abs_lt_one(y0) {
        return Err(Error::DivergentSeries);
    }
    let f = FormulaSpec {
        upper: upper.to_vec(),
        lower: lower.to_vec(),
        z: y0.clone(),
        numerator_poly: vec![1],
        scale: Rational::one(),
        denom_pattern: pattern,
        rhs: AlgebraicConstant::surd_over_pi(Rational::zero(), 1, 0),
        convergent: true,
        start_index: pattern.min_start(),
    };
    let p = ctx.working_bits();
    let eps = ctx.working_eps();
    let mut t = BigFloat::one(p);
    let mut sums = vec![BigFloat::zero(p); j_max + 1];
    let mut n: u64 = 0;
    let mut small = 0;
    loop {
        if n >= f.start_index as u64 {
            let base = t.mul_ratio(&BigInt::one(), &pattern.eval(n));
            let mut term = base;
            let nb = BigInt::from(n);
            for (j, s) in sums.iter_mut().enumerate() {
                if j > 0 {
                    term = term.mul_ratio(&nb, &BigInt::one());
                }
                *s = &*s + &term;
            }
            if term.cmp_abs(&eps).is_lt() && t.cmp_abs(&eps).is_lt() {
                small += 1;
                if small >= 2 {
                    return Ok(sums);
                }
            } else {
                small = 0;
            }
        }
        let (a, b) = crate::hyperseries::term_ratio(&f, n);
        if a.is_zero() {
            return Ok(sums);
        }
        t = t.mul_ratio(&a, &b);
        n += 1;
        if n > 10_000_000 {
            return Err(Error::PrecisionExhausted("t(j) sums did not converge".into()));
        }
    }
}

/// The vector (1/pi^2, t_i^2 for each i, t_i t_j for i < j).
pub fn quadratic_form_vector(t: &[BigFloat], ctx: &PrecisionContext) -> Vec<BigFloat> {
    let pi = ctx.pi();
    let mut v = vec![&BigFloat::one(pi.prec()) / &(pi * pi)];
    for ti in t {
        v.push(ti * ti);
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            v.push(&t[i] * &t[j]);
        }
    }
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticFormSqrt {
    #[serde(serialize_with = "ser_ints")]
    pub linear: Vec<BigInt>,
    pub scale: AlgebraicConstant,
}

fn isqrt_exact(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Write c/pi^2 = sum Q_ij t_i t_j as (sum a_i t_i)^2 with integer a_i.
pub fn sqrt_of_quadratic_form(relation: &RelationResult) -> Result<QuadraticFormSqrt> {
    let c = &relation.coefficients;
    // len = 1 + k + k(k-1)/2
    let k = (1..16)
        .find(|&k| 1 + k + k * (k - 1) / 2 == c.len())
        .ok_or(Error::NotRankOne)?;
    // c0/pi^2 + sum ... = 0, so (-c0)/pi^2 = form; orient so -c0 > 0
    let sign = if c[0].is_negative() { BigInt::one() } else { -BigInt::one() };
    let constant = -&c[0] * &sign;
    if !constant.is_positive() {
        return Err(Error::NotRankOne);
    }
    let diag: Vec<BigInt> = c[1..=k].iter().map(|v| v * &sign).collect();
    let mut cross = vec![vec![BigInt::zero(); k]; k];
    let mut idx = 1 + k;
    for i in 0..k {
        for j in i + 1..k {
            cross[i][j] = &c[idx] * &sign;
            cross[j][i] = cross[i][j].clone();
            idx += 1;
        }
    }
    // pivot: the last nonzero diagonal entry, made a perfect square
    let piv = (0..k).rev().find(|&i| !diag[i].is_zero()).ok_or(Error::NotRankOne)?;
    if diag[piv].is_negative() {
        return Err(Error::NotRankOne);
    }
    let (_, free) = square_part(&diag[piv]);
    let mut mult = free.clone();
    let a_piv = isqrt_exact(&(&diag[piv] * &mult)).ok_or(Error::NotRankOne)?;
    // a_i = cross_i,piv * mult / (2 a_piv), made integral
    let mut a: Vec<Rational> = (0..k)
        .map(|i| {
            if i == piv {
                Rational::from_integer(a_piv.clone())
            } else {
                Rational::new(&cross[i][piv] * &mult, &a_piv * 2)
            }
        })
        .collect();
    let l = a.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    if !l.is_one() {
        for r in a.iter_mut() {
            *r = &*r * Rational::from_integer(l.clone());
        }
        mult = &mult * &l * &l;
    }
    let a: Vec<BigInt> = a.iter().map(|r| r.to_integer()).collect();
    for i in 0..k {
        if &a[i] * &a[i] != &diag[i] * &mult {
            return Err(Error::NotRankOne);
        }
        for j in i + 1..k {
            if &a[i] * &a[j] * 2 != &cross[i][j] * &mult {
                return Err(Error::NotRankOne);
            }
        }
    }
    let (outside, inside) = square_part(&(&constant * &mult));
    let surd = inside.to_u64().ok_or(Error::NotRankOne)?;
    Ok(QuadraticFormSqrt {
        linear: a,
        scale: AlgebraicConstant::surd_over_pi(Rational::from_integer(outside), surd, 1),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Discovery {
    pub relation: RelationResult,
    pub sqrt: QuadraticFormSqrt,
    pub formula: FormulaSpec,
    pub verification: VerifyReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum DiscoveryOutcome {
    Found(Box<Discovery>),
    NoneFound {
        #[serde(serialize_with = "ser_float")]
        norm_bound: BigFloat,
    },
}

/// t-basis, PSLQ on the quadratic-form vector, square root, and a
/// verification of the assembled formula at >= 100 digits.
pub fn discover_formula(
    upper: &[Rational],
    lower: &[Rational],
    y0: &Rational,
    pattern: DenomPattern,
    max_coeff: &BigInt,
    ctx: &PrecisionContext,
) -> Result<DiscoveryOutcome> {
    let t = compute_t_basis(upper, lower, y0, pattern, 2, ctx)?;
    let v = quadratic_form_vector(&t, ctx);
    let relation = match pslq(&v, ctx, max_coeff)? {
        PslqOutcome::Found(r) => r,
        PslqOutcome::NoneBelow { norm_bound } => {
            return Ok(DiscoveryOutcome::NoneFound { norm_bound })
        }
    };
    // the relation must survive doubled precision
    let ctx2 = ctx.with_target(ctx.target_digits() * 2);
    let t2 = compute_t_basis(upper, lower, y0, pattern, 2, &ctx2)?;
    if !passes_residual(&relation.coefficients, &quadratic_form_vector(&t2, &ctx2), &ctx2) {
        return Err(Error::PrecisionExhausted(
            "relation did not survive doubled precision".into(),
        ));
    }
    let sqrt = sqrt_of_quadratic_form(&relation)?;

    // sign of the linear form from the numeric t values
    let mut linear = sqrt.linear.clone();
    if dot(&linear, &t).is_negative() {
        linear.iter_mut().for_each(|c| *c = -&*c);
    }
    let g = linear.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let poly: Vec<i64> = linear
        .iter()
        .map(|c| (c / &g).to_i64().ok_or(Error::NotRankOne))
        .collect::<Result<_>>()?;
    let mut rhs = sqrt.scale.clone();
    rhs.rat = &rhs.rat / Rational::from_integer(g);
    let formula = FormulaSpec {
        upper: upper.to_vec(),
        lower: lower.to_vec(),
        z: y0.clone(),
        numerator_poly: poly,
        scale: Rational::one(),
        denom_pattern: pattern,
        rhs,
        convergent: true,
        start_index: pattern.min_start(),
    };
    let vctx = ctx.with_target(ctx.target_digits().max(100));
    let verification = verify_formula(&formula, &vctx)?;
    if !verification.matched {
        return Err(Error::InvalidFormula(format!(
            "assembled formula agrees to only {} digits",
            verification.digits_agreed
        )));
    }
    Ok(DiscoveryOutcome::Found(Box::new(Discovery {
        relation,
        sqrt,
        formula,
        verification,
    })))
}
