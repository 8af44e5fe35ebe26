use num_bigint::BigInt;
use orrkit::catalog::Catalog;
use orrkit::hyperseries::*;
use orrkit::numeric::PrecisionContext;
use orrkit::rational::{rat, Rational};
use orrkit::Error;

fn formula(id: &str) -> FormulaSpec {
    Catalog::builtin().get(id).unwrap().formula.clone()
}

#[test]
fn ratio_of_half_half_over_one_one() {
    let mut f = formula("eq-3");
    f.upper = vec![rat(1, 2), rat(1, 2)];
    f.lower = vec![rat(1, 1), rat(1, 1)];
    f.z = rat(1, 10);
    for n in 0..10i64 {
        let (a, b) = term_ratio(&f, n as u64);
        let r = Rational::new(a, b);
        let q = rat(2 * n + 1, 2 * n + 2);
        assert_eq!(r, &q * &q * rat(1, 10));
    }
}

#[test]
fn ratio_at_zero_for_eighths() {
    let f = formula("eq-3");
    let (a, b) = term_ratio(&f, 0);
    // (1/8 3/8 5/8 7/8)/(1/2) * 192/2401
    assert_eq!(Rational::new(a, b), rat(105, 4096) * rat(2, 1) * rat(192, 2401));
}

#[test]
fn ratio_vanishes_with_z() {
    let mut f = formula("eq-4");
    f.z = rat(0, 1);
    for n in 0..5 {
        assert_eq!(term_ratio(&f, n).0, BigInt::from(0));
    }
    let ctx = PrecisionContext::new(30);
    let s = sum_series(&f, &ctx).unwrap();
    assert_eq!(s.value.to_decimal(5), "9.0000e1");
    let mut g = formula("eq-3");
    g.z = rat(0, 1);
    assert_eq!(sum_series(&g, &ctx).unwrap().value.to_decimal(5), "1.5000e1");
}

#[test]
fn recurrence_matches_direct_products() {
    for e in Catalog::builtin().entries {
        let terms = exact_terms(&e.formula, 30);
        for (i, t) in terms.iter().enumerate() {
            let n = e.formula.start_index as u64 + i as u64;
            assert_eq!(t, &exact_summand(&e.formula, n), "{} n={n}", e.id);
        }
    }
}

#[test]
fn eq3_at_200_digits() {
    let ctx = PrecisionContext::new(200);
    let r = verify_formula(&formula("eq-3"), &ctx).unwrap();
    assert!(r.matched && r.digits_agreed >= 195, "{r:?}");
}

#[test]
fn perturbed_coefficient_breaks_eq4() {
    let ctx = PrecisionContext::new(60);
    let f = formula("eq-4");
    assert!(verify_formula(&f, &ctx).unwrap().matched);
    let g = f.with_poly(vec![90, 1428, -9216, 70689]);
    let r = verify_formula(&g, &ctx).unwrap();
    assert!(!r.matched && r.digits_agreed < 10, "{r:?}");
}

#[test]
fn pi_squared_series() {
    let ctx = PrecisionContext::new(80);
    for id in ["pi2-532", "pi2-1920"] {
        assert!(verify_formula(&formula(id), &ctx).unwrap().matched, "{id}");
    }
}

#[test]
fn upside_down_series_match_l_value() {
    let ctx = PrecisionContext::new(50);
    for id in ["addendum-upside-1", "addendum-upside-2"] {
        let r = verify_formula(&formula(id), &ctx).unwrap();
        assert!(r.digits_agreed >= 50, "{id}: {r:?}");
    }
}

#[test]
fn divergent_series_refuse_to_sum() {
    let ctx = PrecisionContext::new(20);
    assert!(matches!(
        sum_series(&formula("addendum-div-1"), &ctx),
        Err(Error::DivergentSeries)
    ));
}

#[test]
fn digits_monotone_in_target() {
    let f = formula("for2-ex-2");
    let mut last = 0;
    for t in [50, 100, 200] {
        let d = verify_formula(&f, &PrecisionContext::new(t)).unwrap().digits_agreed;
        assert!(d >= last);
        last = d;
    }
}

#[test]
fn l_value_against_brute_force() {
    // 10^6 terms summed smallest first; the tail is O(1/N^2).
    let mut s = 0.0f64;
    for n in (1..=1_000_000i64).rev() {
        s += chi_minus7(n) as f64 / (n as f64 * n as f64);
    }
    let l = dirichlet_l(-7, 2, &PrecisionContext::new(50)).unwrap().to_f64();
    assert!((s - l).abs() < 1e-10, "{s} vs {l}");
}

#[test]
fn hypergeometric_sum_matches_elliptic_series() {
    use orrkit::numeric::BigComplex;
    let ctx = PrecisionContext::new(60);
    let x = BigComplex::from_ratio_i64(1, 10, ctx.working_bits());
    let half = vec![rat(1, 2), rat(1, 2)];
    let one = vec![rat(1, 1), rat(1, 1)];
    let a = sum_hypergeometric(&half, &one, &x, &ctx).unwrap();
    let b = orrkit::elliptic::k_series(&x, &ctx);
    assert!(orrkit::numeric::digits_agreed(&a, &b, 200) >= 60);
}

fn contiguity_series(s: &Rational, z: &Rational) -> FormulaSpec {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let p = orrkit::telescope::formequiv_numerator(s, z);
    let l = p.coeffs().iter().fold(BigInt::from(1), |l, c| l.lcm(c.denom()));
    let poly = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer().to_i64().unwrap())
        .collect();
    let (upper, lower) = orrkit::telescope::formequiv_params(s);
    FormulaSpec {
        upper,
        lower,
        z: z.clone(),
        numerator_poly: poly,
        scale: Rational::new(BigInt::from(1), l),
        denom_pattern: DenomPattern::TwoNPlusOne,
        rhs: AlgebraicConstant::surd_over_pi(rat(0, 1), 1, 0),
        convergent: true,
        start_index: 0,
    }
}

#[test]
fn contiguity_summand_sums_to_zero() {
    use rand::{Rng, SeedableRng};
    let ctx = PrecisionContext::new(60);
    let eps = orrkit::numeric::BigFloat::pow10(-60, 64);
    let mut pairs = vec![(rat(1, 4), rat(192, 2401)), (rat(1, 4), rat(-16384, 279841))];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    while pairs.len() < 12 {
        let den = [3i64, 4, 6, 8, 10][rng.gen_range(0..5)];
        let s = rat(rng.gen_range(1..den), den);
        let z = rat(rng.gen_range(-40..40), rng.gen_range(50..120));
        if s.is_integer() || (&s * rat(2, 1)).is_integer() || z == rat(0, 1) {
            continue;
        }
        pairs.push((s, z));
    }
    for (s, z) in pairs {
        let sum = sum_series(&contiguity_series(&s, &z), &ctx).unwrap().value;
        assert!(sum.cmp_abs(&eps).is_lt(), "s = {s}, z = {z}: {}", sum.to_decimal(5));
    }
}
