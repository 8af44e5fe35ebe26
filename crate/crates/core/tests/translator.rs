use orrkit::catalog::Catalog;
use orrkit::factorization::FamilyId;
use orrkit::hyperseries::{exact_terms, sum_series, AlgebraicConstant, DenomPattern, FormulaSpec};
use orrkit::numeric::{BigFloat, PrecisionContext};
use orrkit::rational::{int, rat, Rational};
use orrkit::translator::*;
use orrkit::Error;
use proptest::prelude::*;

fn entry(id: &str) -> FormulaSpec {
    Catalog::builtin().get(id).unwrap().formula.clone()
}

fn poly_at(p: &[i64; 4], n: i64) -> Rational {
    int(p.iter().rev().fold(0i64, |acc, &c| acc * n + c))
}

#[test]
fn left_action_is_exact() {
    let base = entry("eq-4").with_poly(vec![1]);
    let op = ThetaOperator::new(90, 1428, -9216, 70688);
    let image = apply_theta_to_series(&op, &base);
    let t0 = exact_terms(&base, 30);
    let t1 = exact_terms(&image, 30);
    for (n, (a, b)) in t0.iter().zip(&t1).enumerate() {
        assert_eq!(b, &(a * poly_at(&op.p, n as i64)));
    }
}

#[test]
fn theta_on_a_geometric_series() {
    // theta applied to sum y^n at y = 1/2: sum n / 2^n = 2
    let f = FormulaSpec {
        upper: vec![],
        lower: vec![],
        z: rat(1, 2),
        numerator_poly: vec![1],
        scale: int(1),
        denom_pattern: DenomPattern::One,
        rhs: AlgebraicConstant::surd_over_pi(int(2), 1, 0),
        convergent: true,
        start_index: 0,
    };
    let g = apply_theta_to_series(&ThetaOperator::new(0, 1, 0, 0), &f);
    assert_eq!(g.numerator_poly, vec![0, 1]);
    let ctx = PrecisionContext::new(40);
    let s = sum_series(&g, &ctx).unwrap().value;
    assert!(distance_to(&s, &int(2)).cmp_abs(&BigFloat::pow10(-40, 64)).is_lt());
}

fn operator_side_gap(op: ThetaOperator, family: &FamilyId, id: &str, ctx: &PrecisionContext) -> BigFloat {
    let x0 = family.x0_closed_form(ctx).unwrap();
    let v = apply_theta_to_rhs(&op, family, &x0, ctx).unwrap();
    let f = apply_theta_to_series(&op, &entry(id).with_poly(vec![1]));
    let s = sum_series(&f, ctx).unwrap().value;
    // the series side carries the entry's scale; the elliptic side does not
    let scale = entry(id).scale;
    let v_scaled = v.re.mul_ratio(scale.numer(), scale.denom());
    (&s - &v_scaled).abs()
}

#[test]
fn operator_side_matches_the_series_side() {
    let ctx = PrecisionContext::new(60);
    for (fam, id, p) in [
        (FamilyId::Fam1, "eq-4", [90, 1428, -9216, 70688]),
        (FamilyId::Fam2, "for2-ex-2", [4200, 53002, -24576, -296225]),
    ] {
        let gap = operator_side_gap(ThetaOperator { p }, &fam, id, &ctx);
        assert!(gap.cmp_abs(&BigFloat::pow10(-50, 64)).is_lt(), "{id}: {}", gap.to_decimal(5));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn random_operators_agree_on_both_sides(p in prop::array::uniform4(-50i64..50)) {
        let ctx = PrecisionContext::new(40);
        let gap = operator_side_gap(ThetaOperator { p }, &FamilyId::Fam2, "for2-ex-2", &ctx);
        prop_assert!(gap.cmp_abs(&BigFloat::pow10(-30, 64)).is_lt());
    }
}

#[test]
fn surd_ratio_is_stable_across_precisions() {
    let op = ThetaOperator::new(90, 1428, -9216, 70688);
    for digits in [150, 300] {
        let ctx = PrecisionContext::new(digits);
        let r = raw_surd_ratio(&op, &FamilyId::Fam1, 21, &ctx).unwrap();
        let tol = BigFloat::pow10(-(digits as i64) + 20, ctx.working_bits());
        assert_eq!(recognize_rational(&r, RECOGNITION_DENOMINATOR_BOUND, &tol), Some(int(294)));
    }
}

#[test]
fn misprinted_operator_is_not_recognized() {
    let ctx = PrecisionContext::new(80);
    let f = entry("eq-4");
    let op = ThetaOperator::new(90, 1428, -9216, 70668);
    match prove_with_operator(&f, &FamilyId::Fam1, &op, &ctx) {
        Err(Error::RecognitionFailure { .. }) => {}
        other => panic!("expected a recognition failure, got {other:?}"),
    }
}

#[test]
fn divergent_formula_is_proved_without_summing() {
    let ctx = PrecisionContext::new(60);
    let f = entry("addendum-div-1");
    assert!(matches!(sum_series(&f, &ctx), Err(Error::DivergentSeries)));
    let r = prove_formula(&f, &FamilyId::Fam3, &ctx).unwrap();
    assert_eq!(r.verdict, Verdict::Proven);
    assert_eq!(r.surd_ratio, "98");
}

#[test]
fn reciprocal_forms_are_not_translated() {
    let ctx = PrecisionContext::new(40);
    assert!(matches!(
        prove_formula(&entry("eq-3"), &FamilyId::Fam1, &ctx),
        Err(Error::NotApplicable(_))
    ));
}
