//! Exact Gosper telescoping over the rationals, the contiguity identity
//! between the 1/(2n+1) and cubic forms, and equivalence transfer.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperseries::{DenomPattern, FormulaSpec};
use crate::rational::{format_rational, int, rat, Rational};

/// Polynomial in n with rational coefficients, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "Poly[{}]", parts.join(", "))
    }
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// n + r
    pub fn linear(r: Rational) -> Self {
        Self::new(vec![r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, n: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_int(&self, n: i64) -> Rational {
        self.eval(&int(n))
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.0.len().max(o.0.len());
        Self::new((0..len).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.0.len().max(o.0.len());
        Self::new((0..len).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    /// p(n + h).
    pub fn shift(&self, h: &Rational) -> Self {
        let step = Self::linear(h.clone());
        self.0
            .iter()
            .rev()
            .fold(Self::default(), |acc, c| acc.mul(&step).add(&Self::constant(c.clone())))
    }

    pub fn shift_int(&self, h: i64) -> Self {
        self.shift(&int(h))
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lc = d.lead();
        if r.len() <= dd {
            return (Self::default(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] / &lc;
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &t * di;
            }
            q[k] = t;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lead()))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Cauchy bound on the absolute value of the roots.
    pub fn root_bound(&self) -> f64 {
        if self.degree() < 1 {
            return 0.0;
        }
        let lc = self.lead();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| to_f64(&(c / &lc)).abs())
            .fold(0.0, f64::max);
        1.0 + m
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::MAX) / r.denom().to_f64().unwrap_or(f64::MAX)
}

/// A hypergeometric term given by v(n_start) and v(n+1)/v(n) = num/den.
#[derive(Debug, Clone)]
pub struct HyperTerm {
    pub num: Poly,
    pub den: Poly,
    pub initial: Rational,
    pub n_start: i64,
}

impl HyperTerm {
    /// v(n_start), v(n_start + 1), ... by the ratio recurrence.
    pub fn values(&self, count: usize) -> Result<Vec<Rational>> {
        let mut out = Vec::with_capacity(count);
        let mut v = self.initial.clone();
        for k in 0..count {
            out.push(v.clone());
            let n = self.n_start + k as i64;
            let d = self.den.eval_int(n);
            if d.is_zero() {
                return Err(Error::InvalidFormula(format!(
                    "ratio denominator vanishes at n = {n}"
                )));
            }
            v = v * self.num.eval_int(n) / d;
        }
        Ok(out)
    }
}

/// w(n) = R(n) v(n) with w(n+1) - w(n) = v(n).
#[derive(Debug, Clone)]
pub struct GosperCertificate {
    pub r_num: Poly,
    pub r_den: Poly,
}

impl GosperCertificate {
    pub fn r(&self, n: i64) -> Option<Rational> {
        let d = self.r_den.eval_int(n);
        (!d.is_zero()).then(|| self.r_num.eval_int(n) / d)
    }
}

/// Solve M x = rhs over the rationals; free variables are set to 0.
fn solve_linear(m: Vec<Vec<Rational>>, rhs: Vec<Rational>, unknowns: usize) -> Option<Vec<Rational>> {
    let rows = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            r.resize(unknowns, Rational::zero());
            r.push(b);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, pr);
        let inv = Rational::one() / &aug[row][col];
        for v in aug[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=unknowns {
                    let t = &f * &aug[row][c];
                    aug[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if aug[row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][unknowns].clone();
    }
    Some(x)
}

/// Gosper's algorithm. `None` means v has no hypergeometric antidifference.
pub fn gosper(term: &HyperTerm) -> Option<GosperCertificate> {
    let mut a = term.num.clone();
    let mut b = term.den.clone();
    let mut c = Poly::one();
    if a.is_zero() {
        return None;
    }
    // gcd(a(n), b(n+h)) = 1 for every h >= 0; candidate h are bounded by the
    // sum of the root bounds
    let hmax = (a.root_bound() + b.root_bound()).ceil() as i64 + 1;
    for h in 0..=hmax {
        loop {
            let g = a.gcd(&b.shift_int(h));
            if g.degree() < 1 {
                break;
            }
            a = a.div_rem(&g).0;
            b = b.div_rem(&g.shift_int(-h)).0;
            for i in 1..=h {
                c = c.mul(&g.shift_int(-i));
            }
        }
    }

    // a(n) x(n+1) - b(n-1) x(n) = c(n)
    let bm = b.shift_int(-1);
    let plus = a.add(&bm);
    let minus = a.sub(&bm);
    let dc = c.degree();
    let mut cands = vec![0i64];
    if minus.degree() >= plus.degree() {
        cands.push(dc - minus.degree());
    } else {
        let l = plus.degree();
        cands.push(dc - l + 1);
        let alpha = minus.coeff((l - 1).max(0) as usize);
        let beta = plus.lead();
        let d0 = -(alpha * int(2)) / beta;
        if d0.is_integer() {
            cands.push(d0.to_integer().to_i64().unwrap_or(0).abs());
        }
    }
    let d = *cands.iter().max().unwrap();
    if d < 0 {
        return None;
    }
    let d = d as usize;
    let cols: Vec<Poly> = (0..=d)
        .map(|j| {
            let nj = Poly::new({
                let mut v = vec![Rational::zero(); j + 1];
                v[j] = Rational::one();
                v
            });
            a.mul(&nj.shift_int(1)).sub(&bm.mul(&nj))
        })
        .collect();
    let rows = cols
        .iter()
        .map(|p| p.degree())
        .chain(std::iter::once(c.degree()))
        .max()
        .unwrap()
        .max(0) as usize
        + 1;
    let m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| cols.iter().map(|p| p.coeff(i)).collect())
        .collect();
    let rhs: Vec<Rational> = (0..rows).map(|i| c.coeff(i)).collect();
    let x = Poly::new(solve_linear(m, rhs, d + 1)?);
    if x.is_zero() {
        return None;
    }
    Some(GosperCertificate {
        r_num: bm.mul(&x),
        r_den: c,
    })
}

/// B(n,s) parameters: (s/2, (1-s)/2, (1+s)/2, 1 - s/2) over (1/2, 1, 1, 1).
pub fn formequiv_params(s: &Rational) -> (Vec<Rational>, Vec<Rational>) {
    let half = rat(1, 2);
    let one = int(1);
    (
        vec![
            s * &half,
            (&one - s) * &half,
            (&one + s) * &half,
            &one - s * &half,
        ],
        vec![half, one.clone(), one.clone(), one],
    )
}

/// P(n) with v(n) = B(n,s) z^n P(n) / (2n+1):
/// Q(n) + (2n+1)(12 n^2 - 8(1-z)/z n^3),
/// Q(n) = s(s^2-1)(s-2) + 4(1+2s-2s^2) n + 8(1+s-s^2) n^2.
pub fn formequiv_numerator(s: &Rational, z: &Rational) -> Poly {
    let one = int(1);
    let s2 = s * s;
    let q = Poly::new(vec![
        s * (&s2 - &one) * (s - int(2)),
        int(4) * (&one + int(2) * s - int(2) * &s2),
        int(8) * (&one + s - &s2),
    ]);
    let cubic = Poly::new(vec![
        Rational::zero(),
        Rational::zero(),
        int(12),
        -(int(8) * (&one - z) / z),
    ]);
    q.add(&Poly::from_ints(&[1, 2]).mul(&cubic))
}

/// The summand of the contiguity identity as a single hypergeometric term.
pub fn formequiv_term(s: &Rational, z: &Rational) -> HyperTerm {
    let (up, lo) = formequiv_params(s);
    let p = formequiv_numerator(s, z);
    let prod = |v: &[Rational]| {
        v.iter()
            .fold(Poly::one(), |acc, r| acc.mul(&Poly::linear(r.clone())))
    };
    // v(n+1)/v(n) = prod(n+u)/prod(n+l) z P(n+1)(2n+1) / (P(n)(2n+3))
    let num = prod(&up)
        .mul(&p.shift_int(1))
        .mul(&Poly::from_ints(&[1, 2]))
        .scale(z);
    let den = prod(&lo).mul(&p).mul(&Poly::from_ints(&[3, 2]));
    HyperTerm {
        num,
        den,
        initial: p.eval_int(0),
        n_start: 0,
    }
}

/// v(n) from the definition, by direct products.
pub fn formequiv_direct(s: &Rational, z: &Rational, n: i64) -> Rational {
    let (up, lo) = formequiv_params(s);
    let poch = |v: &[Rational]| {
        let mut acc = Rational::one();
        for p in v {
            for k in 0..n {
                acc *= p + int(k);
            }
        }
        acc
    };
    let mut zn = Rational::one();
    for _ in 0..n {
        zn *= z;
    }
    poch(&up) / poch(&lo) * zn * formequiv_numerator(s, z).eval_int(n) / int(2 * n + 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct FormequivReport {
    pub s: String,
    pub z: String,
    /// Certificate R(n) = r_num(n) / r_den(n), ascending coefficients.
    pub r_num: Vec<String>,
    pub r_den: Vec<String>,
    pub w0: String,
    pub points_checked: usize,
    pub partial_sums_checked: Vec<usize>,
    /// |z| < 1, so w(n) -> 0 and the telescoped sum is an honest 0.
    pub w_tends_to_zero: bool,
    pub proven: bool,
}

/// Prove sum_n v(n) = 0 for the contiguity summand at rational (s, z).
pub fn verify_formequiv(s: &Rational, z: &Rational) -> Result<FormequivReport> {
    if s.is_integer() {
        return Err(Error::NotApplicable("s must not be an integer".into()));
    }
    if z.is_zero() {
        return Err(Error::NotApplicable("z must be nonzero".into()));
    }
    const POINTS: usize = 50;
    let term = formequiv_term(s, z);
    let cert = gosper(&term).ok_or_else(|| {
        Error::CertificateNotFound(format!("s = {}, z = {}", format_rational(s), format_rational(z)))
    })?;
    let v = term.values(POINTS + 2)?;
    for (n, vn) in v.iter().enumerate().take(31) {
        if vn != &formequiv_direct(s, z, n as i64) {
            return Err(Error::InvalidFormula(format!(
                "ratio recurrence disagrees with direct evaluation at n = {n}"
            )));
        }
    }
    let w = |n: usize| -> Result<Rational> {
        cert.r(n as i64).map(|r| r * &v[n]).ok_or_else(|| {
            Error::CertificateNotFound(format!("certificate has a pole at n = {n}"))
        })
    };
    let w0 = w(0)?;
    for n in 0..POINTS {
        if w(n + 1)? - w(n)? != v[n] {
            return Err(Error::CertificateNotFound(format!(
                "w(n+1) - w(n) != v(n) at n = {n}"
            )));
        }
    }
    let mut partial = Vec::new();
    for big_n in [10usize, 20, 40] {
        let sum: Rational = v[..=big_n].iter().sum();
        if sum != w(big_n + 1)? - &w0 {
            return Err(Error::CertificateNotFound(format!(
                "partial sum mismatch at N = {big_n}"
            )));
        }
        partial.push(big_n);
    }
    Ok(FormequivReport {
        s: format_rational(s),
        z: format_rational(z),
        r_num: cert.r_num.to_strings(),
        r_den: cert.r_den.to_strings(),
        w0: format_rational(&w0),
        points_checked: POINTS,
        partial_sums_checked: partial,
        w_tends_to_zero: crate::rational::abs_lt_one(z),
        proven: w0.is_zero(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub alpha: String,
    pub beta: String,
    pub s: String,
    pub implied_rhs: String,
    pub rhs_matches: bool,
    pub formequiv: FormequivReport,
    pub proven: bool,
}

fn same_multiset(a: &[Rational], b: &[Rational]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}

fn pattern_poly(p: DenomPattern) -> Poly {
    Poly::from_ints(&p.coefficients())
}

/// target = alpha * proved + beta * (contiguity summand), as rational
/// functions of n; the right sides then must satisfy target = alpha * proved.
pub fn equivalence_transfer(proved: &FormulaSpec, target: &FormulaSpec) -> Result<EquivalenceReport> {
    if !same_multiset(&proved.upper, &target.upper)
        || !same_multiset(&proved.lower, &target.lower)
        || proved.z != target.z
        || proved.start_index != target.start_index
    {
        return Err(Error::NotApplicable(
            "the two formulas do not share parameters and argument".into(),
        ));
    }
    let s = proved
        .upper
        .iter()
        .min()
        .map(|m| m * int(2))
        .ok_or_else(|| Error::NotApplicable("no parameters".into()))?;
    let (up, lo) = formequiv_params(&s);
    if !same_multiset(&up, &proved.upper) || !same_multiset(&lo, &proved.lower) {
        return Err(Error::NotApplicable(
            "parameters are not of the form B(n,s)".into(),
        ));
    }
    let z = &proved.z;
    let to_poly = |f: &FormulaSpec| Poly::from_ints(&f.numerator_poly).scale(&f.scale);
    let (pt, dt) = (to_poly(target), pattern_poly(target.denom_pattern));
    let (pp, dp) = (to_poly(proved), pattern_poly(proved.denom_pattern));
    let (pf, df) = (formequiv_numerator(&s, z), Poly::from_ints(&[1, 2]));
    // pt/dt = alpha pp/dp + beta pf/df, times dt dp df
    let lhs = pt.mul(&dp).mul(&df);
    let col_a = pp.mul(&dt).mul(&df);
    let col_b = pf.mul(&dt).mul(&dp);
    let rows = [lhs.degree(), col_a.degree(), col_b.degree()]
        .into_iter()
        .max()
        .unwrap()
        .max(0) as usize
        + 1;
    let m: Vec<Vec<Rational>> = (0..rows).map(|i| vec![col_a.coeff(i), col_b.coeff(i)]).collect();
    let rhs: Vec<Rational> = (0..rows).map(|i| lhs.coeff(i)).collect();
    let sol = solve_linear(m, rhs, 2).ok_or(Error::NoLinearRelation)?;
    let (alpha, beta) = (sol[0].clone(), sol[1].clone());
    if alpha.is_zero() {
        return Err(Error::NoLinearRelation);
    }
    let fe = verify_formequiv(&s, z)?;
    let rhs_matches = proved.rhs.surd == target.rhs.surd
        && proved.rhs.pi_power == target.rhs.pi_power
        && proved.rhs.l_value.is_none()
        && target.rhs.l_value.is_none()
        && target.rhs.rat == &alpha * &proved.rhs.rat;
    let mut implied = proved.rhs.clone();
    implied.rat = &alpha * &proved.rhs.rat;
    Ok(EquivalenceReport {
        alpha: format_rational(&alpha),
        beta: format_rational(&beta),
        s: format_rational(&s),
        implied_rhs: implied.describe(),
        rhs_matches,
        proven: rhs_matches && fe.proven,
        formequiv: fe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(num: &[i64], den: &[i64], initial: Rational, n_start: i64) -> HyperTerm {
        HyperTerm {
            num: Poly::from_ints(num),
            den: Poly::from_ints(den),
            initial,
            n_start,
        }
    }

    #[test]
    fn poly_basics() {
        let p = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(p.shift_int(-1), Poly::from_ints(&[0, 0, 1]));
        let (q, r) = p.div_rem(&Poly::from_ints(&[1, 1]));
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&Poly::from_ints(&[-1, 0, 1])), Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn reciprocal_pairs_telescope() {
        // v(n) = 1/(n(n+1)), ratio n/(n+2), v(1) = 1/2
        let t = term(&[0, 1], &[2, 1], rat(1, 2), 1);
        let c = gosper(&t).unwrap();
        // w(n) = -1/n
        let v = t.values(10).unwrap();
        for (k, vk) in v.iter().enumerate() {
            let n = 1 + k as i64;
            assert_eq!(c.r(n).unwrap() * vk, rat(-1, n));
        }
    }

    #[test]
    fn polynomial_antidifference() {
        // v(n) = n from n = 1: ratio (n+1)/n
        let t = term(&[1, 1], &[0, 1], int(1), 1);
        let c = gosper(&t).unwrap();
        let v = t.values(10).unwrap();
        for (k, vk) in v.iter().enumerate() {
            let n = 1 + k as i64;
            assert_eq!(c.r(n).unwrap() * vk, rat(n * (n - 1), 2));
        }
    }

    #[test]
    fn harmonic_is_not_summable() {
        // v(n) = 1/n: ratio n/(n+1)
        assert!(gosper(&term(&[0, 1], &[1, 1], int(1), 1)).is_none());
    }

    #[test]
    fn contiguity_at_first_point() {
        let r = verify_formequiv(&rat(1, 4), &rat(192, 2401)).unwrap();
        assert!(r.proven && r.w_tends_to_zero);
    }
}
