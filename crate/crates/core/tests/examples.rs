//! Documented example values, each checked against an independent
//! oracle: a closed form in f64, or evaluation at a real embedding.

use std::sync::OnceLock;

use heightlab::arith::{q, qf, Q};
use heightlab::cli::expr::evaluate;
use heightlab::cli::{bundled_scenario, parse_scenario, Scenario};
use heightlab::heights::{g_combine, g_equal, g_height, is_torsion, weil_height, GElement};
use heightlab::numberfield::galois::galois_condition;
use heightlab::numberfield::{factor_over_q, subfield, FieldElement, Poly, WorkingField};
use heightlab::orbits::{degree_of_power, in_kdiv, orbit_mod_torsion, vk_bounds, width_k};
use heightlab::placespace::{places, PlaceId, PlaceSpace};
use heightlab::projections::{
    check_commutes, check_conjugation, composite_project, is_member, operator_norm_check, s_project, t_project,
    ProjectionSpec,
};
use num_bigint::BigInt;

const EPS: f64 = 1e-12;

fn sqrt2_field() -> &'static WorkingField {
    static F: OnceLock<WorkingField> = OnceLock::new();
    F.get_or_init(|| WorkingField::new(Poly::from_ints(&[-2, 0, 1])).unwrap())
}

fn biquad() -> &'static Scenario {
    static S: OnceLock<Scenario> = OnceLock::new();
    S.get_or_init(|| bundled_scenario("biquadratic", None).unwrap())
}

fn cube_root_two() -> &'static Scenario {
    static S: OnceLock<Scenario> = OnceLock::new();
    S.get_or_init(|| bundled_scenario("cube_root_two", None).unwrap())
}

/// Value of `a` at the real embedding t -> x, in f64.
fn at(a: &FieldElement, x: f64) -> f64 {
    a.coords().iter().rev().fold(0.0, |acc, c| acc * x + c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap())
}

const BIQUAD_THETA: f64 = std::f64::consts::SQRT_2 + 1.732_050_807_568_877_2;

fn g(f: &WorkingField, scale: Q, base: FieldElement) -> GElement {
    GElement::new(f, scale, base).unwrap()
}

#[test]
fn field_construction() {
    let f = sqrt2_field();
    assert_eq!((f.degree(), f.torsion_order(), f.group_order()), (2, 2, 2));
    assert_eq!(f.automorphisms()[1], f.theta().neg());

    let b = &biquad().field;
    assert_eq!((b.degree(), b.torsion_order()), (4, 2));
    // (Z/2)^2: every automorphism is an involution and the group is abelian
    for s in 0..4 {
        assert_eq!(b.compose(s, s), 0);
        for t in 0..4 {
            assert_eq!(b.compose(s, t), b.compose(t, s));
        }
    }
    // theta = sqrt2 + sqrt3 satisfies the defining polynomial
    let th = BIQUAD_THETA;
    assert!((th.powi(4) - 10.0 * th * th + 1.0).abs() < 1e-10);

    let z = WorkingField::new(Poly::from_ints(&[1, 1, 1])).unwrap();
    assert_eq!(z.torsion_order(), 6);
}

#[test]
fn factoring_x6_minus_4() {
    let p = Poly::from_ints(&[-4, 0, 0, 0, 0, 0, 1]);
    let fac = factor_over_q(&p);
    let mut got: Vec<Poly> = fac.factors.iter().map(|(q, e)| {
        assert_eq!(*e, 1);
        q.clone()
    }).collect();
    got.sort_by_key(|q| q.coeff(0).numer().clone());
    assert_eq!(got, vec![Poly::from_ints(&[-2, 0, 0, 1]), Poly::from_ints(&[2, 0, 0, 1])]);
    let product = got.iter().fold(Poly::one(), |acc, q| &acc * q);
    assert_eq!(product.scale(&fac.content), p);
}

#[test]
fn minimal_polynomial_of_one_plus_sqrt2() {
    let f = sqrt2_field();
    let a = f.one().add(&f.theta());
    assert_eq!(f.minimal_polynomial(&a), Poly::from_ints(&[-1, -2, 1]));
}

#[test]
fn square_roots_of_three() {
    let b = &biquad().field;
    let roots = b.roots_in_field(&Poly::from_ints(&[-3, 0, 1]));
    assert_eq!(roots.len(), 2);
    let mut values: Vec<f64> = roots.iter().map(|r| at(r, BIQUAD_THETA)).collect();
    values.sort_by(f64::total_cmp);
    assert!((values[0] + 3f64.sqrt()).abs() < 1e-9 && (values[1] - 3f64.sqrt()).abs() < 1e-9);
    let s3 = evaluate("(11*t - t^3)/2", b).unwrap();
    assert_eq!(b.mul(&s3, &s3), b.from_int(3));
    assert!((at(&s3, BIQUAD_THETA) - 3f64.sqrt()).abs() < 1e-9);
    // the other documented radicals, evaluated at the real embedding
    let s2 = evaluate("(t^3 - 9*t)/2", b).unwrap();
    let s6 = evaluate("(t^2 - 5)/2", b).unwrap();
    assert!((at(&s2, BIQUAD_THETA) - 2f64.sqrt()).abs() < 1e-9);
    assert!((at(&s6, BIQUAD_THETA) - 6f64.sqrt()).abs() < 1e-9);
}

#[test]
fn subfield_of_sqrt2() {
    let sc = biquad();
    let k = subfield(&sc.field, &[sc.element("sqrt2").unwrap().clone()]);
    assert_eq!((k.fixing_group().len(), k.degree_over_q()), (2, 2));
}

#[test]
fn galois_condition_fails_for_conjugate_cubic_fields() {
    let sc = cube_root_two();
    let f = &sc.field;
    assert!(!galois_condition(f, sc.subfield("K1").unwrap(), sc.subfield("K2").unwrap()));
    assert!(galois_condition(f, sc.subfield("K1").unwrap(), sc.subfield("K3").unwrap()));
    // the declared generators really are 2^(1/3), w 2^(1/3) and w
    let c = sc.element("cbrt2").unwrap();
    assert_eq!(f.pow(c, 3), f.from_int(2));
    let w = sc.element("omega").unwrap();
    assert_eq!(f.pow(w, 3), f.one());
    assert_eq!(f.mul(c, w), *sc.element("omega_cbrt2").unwrap());
    assert_eq!(f.defining_poly(), &heightlab::cli::corpus::cube_root_two_polynomial());
}

#[test]
fn heights() {
    let f = sqrt2_field();
    let h = |a: &FieldElement| weil_height(f, a).unwrap().value;
    assert!((h(&f.from_int(2)) - 2f64.ln()).abs() < EPS);
    assert!((h(&f.theta()) - 0.5 * 2f64.ln()).abs() < EPS);
    let a = f.one().add(&f.theta());
    assert!((h(&a) - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < EPS);
    assert!((h(&a) - 0.440687).abs() < 1e-6);
}

#[test]
fn torsion_detection() {
    let f = WorkingField::new(Poly::from_ints(&[1, 1, 1])).unwrap();
    let zeta6 = f.one().add(&f.theta());
    // a root of x^2 - x + 1 of exact order 6
    assert_eq!(f.mul(&zeta6, &zeta6).sub(&zeta6).add(&f.one()), f.zero());
    assert!(is_torsion(&f, &zeta6).unwrap());
    assert_ne!(f.pow(&zeta6, 3), f.one());
    assert!(!is_torsion(&f, &f.from_int(2)).unwrap());
}

#[test]
fn group_elements() {
    let f = sqrt2_field();
    assert!(g_equal(f, &g(f, qf(1, 2), f.from_int(2)), &g(f, q(1), f.theta())));
    let h = g_height(f, &g(f, qf(1, 2), f.from_int(2))).unwrap().value;
    assert!((h - 0.5 * 2f64.ln()).abs() < EPS);
    let h = g_height(f, &g(f, q(-3), f.from_int(2))).unwrap().value;
    assert!((h - 3.0 * 2f64.ln()).abs() < EPS);

    let sc = biquad();
    let b = &sc.field;
    let s2 = GElement::of(b, sc.element("sqrt2").unwrap().clone()).unwrap();
    let s3 = GElement::of(b, sc.element("sqrt3").unwrap().clone()).unwrap();
    let s6 = GElement::of(b, sc.element("sqrt6").unwrap().clone()).unwrap();
    assert!(g_equal(b, &g_combine(b, &[s2, s3]), &s6));
}

#[test]
fn orbits_over_q() {
    let f = sqrt2_field();
    let k = subfield(f, &[]);
    let t = f.theta();
    let r = orbit_mod_torsion(f, &t, &k).unwrap();
    assert_eq!((r.representatives.len(), r.delta, r.conjugate_count), (1, 1, 2));
    let a = f.one().add(&t);
    let r = orbit_mod_torsion(f, &a, &k).unwrap();
    assert_eq!(r.delta, 2);
    let l = (1.0 + 2f64.sqrt()).ln();
    assert!((r.width.value - l).abs() < EPS);
    assert!((r.width.value - 0.881374).abs() < 1e-6);
    assert!(width_k(f, &t, &k).unwrap().is_exact_zero());

    let w = f.torsion_order() as i64;
    assert_eq!(degree_of_power(f, &t, w, &k).unwrap(), 1);
    assert_eq!(degree_of_power(f, &a, w, &k).unwrap(), 2);
    assert_eq!(degree_of_power(f, &a, 5, &k).unwrap(), 2);

    let b = vk_bounds(f, &t, &k).unwrap();
    assert_eq!((b.lower.value, b.upper.value), (0.0, 0.0));
    let b = vk_bounds(f, &a, &k).unwrap();
    assert!((b.lower.value - l / 2.0).abs() < EPS && (b.upper.value - l / 2.0).abs() < EPS);

    let wit = in_kdiv(f, &t, &k).unwrap().unwrap();
    assert_eq!((wit.exponent, wit.power.clone()), (2, f.from_int(2)));
    assert!(in_kdiv(f, &a, &k).unwrap().is_none());

    let sc = biquad();
    assert!(in_kdiv(&sc.field, sc.element("sqrt6").unwrap(), sc.subfield("K1").unwrap()).unwrap().is_some());
}

#[test]
fn archimedean_places() {
    let f = sqrt2_field();
    let p = places(f);
    assert_eq!(p.len(), 2);
    assert!(p.iter().all(|(_, w)| *w == qf(1, 2)));
    let z = WorkingField::new(Poly::from_ints(&[1, 1, 1])).unwrap();
    assert_eq!(places(&z), vec![(PlaceId::Archimedean { class: 0 }, q(1))]);
}

#[test]
fn local_factorizations() {
    let f = sqrt2_field();
    let ps = PlaceSpace::new(f);
    let lf = ps.local_factorization(&f.theta(), &BigInt::from(2)).unwrap();
    assert_eq!(lf.factors.len(), 1);
    let x = &lf.factors[0];
    assert_eq!((x.e, x.f, x.valuation), (2, 1, 1));
    let lf = ps.local_factorization(&f.from_int(3), &BigInt::from(3)).unwrap();
    let sum: i64 = lf.factors.iter().map(|x| x.f as i64 * x.valuation).sum();
    assert_eq!(sum, 2);
}

#[test]
fn place_vectors() {
    let ln2 = 2f64.ln();
    let qs = parse_scenario(r#"{"v":1,"field":[0,1]}"#, None).unwrap();
    let ps = PlaceSpace::new(&qs.field);
    let v = ps.f_vector(&GElement::of(&qs.field, qs.field.from_int(2)).unwrap()).unwrap();
    let arch = &v.entries[&PlaceId::Archimedean { class: 0 }];
    let fin = &v.entries[&PlaceId::Finite { p: 2, ideal: 0 }];
    assert!((arch.value - ln2).abs() < EPS && arch.weight == q(1));
    assert!((fin.value + ln2).abs() < EPS && fin.weight == q(1));
    assert!(v.integral().value.abs() < EPS);

    let f = sqrt2_field();
    let ps = PlaceSpace::new(f);
    let v = ps.f_vector(&GElement::of(f, f.theta()).unwrap()).unwrap();
    assert_eq!(v.entries.len(), 3);
    for c in 0..2 {
        let e = &v.entries[&PlaceId::Archimedean { class: c }];
        assert!((e.value - ln2 / 2.0).abs() < EPS && e.weight == qf(1, 2));
    }
    let e = &v.entries[&PlaceId::Finite { p: 2, ideal: 0 }];
    assert!((e.value + ln2 / 2.0).abs() < EPS && e.weight == q(1));
    assert!((v.l1_norm().value - ln2).abs() < EPS);

    let half2 = ps.f_vector(&g(f, qf(1, 2), f.from_int(2))).unwrap();
    assert!((half2.l1_norm().value - ln2).abs() < EPS);
    for (id, e) in &v.entries {
        assert!((half2.entries[id].value - e.value).abs() < EPS);
    }

    let unit = ps.f_vector(&GElement::of(f, f.one().add(&f.theta())).unwrap()).unwrap();
    assert!(unit.integral().value.abs() < EPS);
    let moved = ps.permute_by_automorphism(&unit, 1).unwrap();
    let (a0, a1) = (PlaceId::Archimedean { class: 0 }, PlaceId::Archimedean { class: 1 });
    assert_eq!(moved.entries[&a0].value, unit.entries[&a1].value);
    assert_eq!(moved.entries[&a1].value, unit.entries[&a0].value);
    assert!(unit.entries.keys().all(|k| matches!(k, PlaceId::Archimedean { .. })));
}

#[test]
fn projections_in_biquadratic_field() {
    let sc = biquad();
    let f = &sc.field;
    let k1 = sc.subfield("K1").unwrap();
    let k2 = sc.subfield("K2").unwrap();
    let u = GElement::of(f, sc.element("one_plus_sqrt3").unwrap().clone()).unwrap();
    assert!(g_equal(f, &s_project(f, &u, k1), &g(f, qf(1, 2), f.from_int(-2))));
    let s3 = sc.element("sqrt3").unwrap();
    assert!(g_equal(f, &t_project(f, &u, k1), &g(f, qf(1, 2), f.from_int(-2).sub(s3))));
    let theta = GElement::of(f, f.theta()).unwrap();
    assert!(s_project(f, &theta, k2).is_zero());

    let spec = ProjectionSpec::new(vec![k1.clone(), k2.clone()], vec![]);
    let s6 = GElement::of(f, sc.element("sqrt6").unwrap().clone()).unwrap();
    assert!(g_equal(f, &composite_project(f, &s6, &spec), &s6));
    assert!(composite_project(f, &theta, &spec).is_zero());
    assert!(is_member(f, &s6, &spec).unwrap().is_member);
    assert!(!is_member(f, &theta, &spec).unwrap().is_member);
    assert!(check_commutes(f, k1, k2, &[u.clone(), s6, theta]));

    // S-image is half the place vector of -2, norm log 2
    let ps = PlaceSpace::new(f);
    let (img, src) = operator_norm_check(&ps, &u, k1).unwrap();
    assert!((img.value - 2f64.ln()).abs() < 1e-9);
    assert!((src.value - (1.0 + 3f64.sqrt()).ln()).abs() < 1e-9);
    assert!(img.value <= src.value);
}

#[test]
fn conjugate_cubic_fields() {
    let sc = cube_root_two();
    let f = &sc.field;
    let (k, l) = (sc.subfield("K1").unwrap(), sc.subfield("K2").unwrap());
    let c = sc.element("cbrt2").unwrap();
    let sigma = (0..f.group_order()).find(|&s| f.apply_automorphism(s, c) == *sc.element("omega_cbrt2").unwrap()).unwrap();
    let testset: Vec<GElement> =
        sc.elements.iter().map(|e| GElement::of(f, e.2.clone()).unwrap()).collect();
    assert!(check_conjugation(f, k, l, sigma, &testset).unwrap());
    assert!(check_conjugation(f, k, l, 0, &testset).is_err());
}

#[test]
fn rational_heights() {
    let sc = bundled_scenario("rationals", None).unwrap();
    let f = &sc.field;
    for (name, _, a) in &sc.elements {
        let c = &a.coords()[0];
        let p: f64 = c.numer().to_string().parse::<f64>().unwrap().abs();
        let qd: f64 = c.denom().to_string().parse().unwrap();
        let want = p.max(qd).ln();
        let got = weil_height(f, a).unwrap().value;
        assert!((got - want).abs() < 1e-9 * (1.0 + want), "{}: {} vs {}", name, got, want);
    }
}

#[test]
fn bundled_scenarios_declare_documented_objects() {
    let sc = biquad();
    for n in ["sqrt2", "sqrt3", "sqrt6", "sqrt2_plus_sqrt3", "one_plus_sqrt3"] {
        assert!(sc.element(n).is_ok(), "{}", n);
    }
    assert!(sc.subfield("K1").is_ok() && sc.subfield("K2").is_ok());
    let c = cube_root_two();
    for n in ["K1", "K2", "K3"] {
        assert_eq!(c.subfield(n).unwrap().degree_over_q(), if n == "K3" { 2 } else { 3 });
    }
    for name in heightlab::cli::corpus::bundled_names() {
        let s = bundled_scenario(name, None).unwrap();
        assert!(s.elements.len() >= 20, "{}", name);
    }
}
