use std::sync::OnceLock;

use heightlab::arith::{fmt_q, parse_q, qf, Q};
use heightlab::cli::{bundled_scenario, Scenario};
use heightlab::heights::{g_combine, g_equal, g_height, g_sub, weil_height, GElement};
use heightlab::numberfield::{FieldElement, WorkingField};
use heightlab::orbits::delta_k;
use heightlab::placespace::{weights_partition, PlaceSpace};
use heightlab::projections::{s_project, t_project};
use proptest::prelude::*;

fn biquad() -> &'static Scenario {
    static S: OnceLock<Scenario> = OnceLock::new();
    S.get_or_init(|| bundled_scenario("biquadratic", None).unwrap())
}

fn eisenstein() -> &'static Scenario {
    static S: OnceLock<Scenario> = OnceLock::new();
    S.get_or_init(|| bundled_scenario("eisenstein", None).unwrap())
}

fn coords(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), n)
}

fn element(f: &WorkingField, c: &[(i64, i64)]) -> FieldElement {
    FieldElement::from_coords(c.iter().map(|&(n, d)| qf(n, d)).collect::<Vec<Q>>().into_iter().take(f.degree()).collect())
}

fn nonzero(f: &WorkingField, c: &[(i64, i64)]) -> FieldElement {
    let a = element(f, c);
    if a.is_zero() {
        f.one()
    } else {
        a
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn automorphisms_are_ring_homomorphisms(x in coords(4), y in coords(4), s in 0usize..4) {
        let f = &biquad().field;
        let (a, b) = (element(f, &x), element(f, &y));
        prop_assert_eq!(f.apply_automorphism(s, &f.mul(&a, &b)), f.mul(&f.apply_automorphism(s, &a), &f.apply_automorphism(s, &b)));
        prop_assert_eq!(f.apply_automorphism(s, &a.add(&b)), f.apply_automorphism(s, &a).add(&f.apply_automorphism(s, &b)));
        let t = (s + 1) % 4;
        prop_assert_eq!(f.apply_automorphism(f.compose(s, t), &a), f.apply_automorphism(s, &f.apply_automorphism(t, &a)));
    }

    #[test]
    fn inverse_multiplies_to_one(x in coords(4)) {
        let f = &biquad().field;
        let a = nonzero(f, &x);
        prop_assert!(f.mul(&a, &f.inv(&a).unwrap()).is_one());
    }

    #[test]
    fn rational_text_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..10_000) {
        let x = qf(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)), Some(x));
    }

    #[test]
    fn group_equality_is_an_equivalence(x in coords(4), k in 1i64..4, s in 1i64..4) {
        let f = &biquad().field;
        let a = nonzero(f, &x);
        let u = GElement::new(f, qf(1, s), a.clone()).unwrap();
        let v = GElement::new(f, qf(1, s * k), f.pow(&a, k)).unwrap();
        prop_assert!(g_equal(f, &u, &u));
        prop_assert!(g_equal(f, &u, &v) && g_equal(f, &v, &u));
        let w = GElement::new(f, qf(1, s * k * 2), f.pow(&a, 2 * k)).unwrap();
        prop_assert!(g_equal(f, &v, &w) && g_equal(f, &u, &w));
    }

    #[test]
    fn torsion_factors_vanish(x in coords(2), j in 0i64..6) {
        let f = &eisenstein().field;
        let a = nonzero(f, &x);
        let z = f.pow(f.torsion_generator(), j);
        let u = GElement::of(f, a.clone()).unwrap();
        prop_assert!(g_equal(f, &u, &GElement::of(f, f.mul(&a, &z)).unwrap()));
    }

    #[test]
    fn height_scales_and_is_galois_invariant(x in coords(4), n in 1i64..4, s in 0usize..4) {
        let f = &biquad().field;
        let a = nonzero(f, &x);
        let h = weil_height(f, &a).unwrap().value;
        prop_assert!(close(weil_height(f, &f.pow(&a, n)).unwrap().value, n as f64 * h));
        prop_assert!(close(weil_height(f, &f.apply_automorphism(s, &a)).unwrap().value, h));
        prop_assert!(close(weil_height(f, &f.inv(&a).unwrap()).unwrap().value, h));
        let u = GElement::new(f, qf(1, n), a).unwrap();
        prop_assert!(close(g_height(f, &u).unwrap().value, h / n as f64));
    }

    #[test]
    fn height_triangle_inequality(x in coords(4), y in coords(4)) {
        let f = &biquad().field;
        let (a, b) = (nonzero(f, &x), nonzero(f, &y));
        let u = GElement::of(f, a.clone()).unwrap();
        let v = GElement::of(f, b.clone()).unwrap();
        let sum = g_height(f, &g_combine(f, &[u.clone(), v.clone()])).unwrap().value;
        let hu = g_height(f, &u).unwrap().value;
        let hv = g_height(f, &v).unwrap().value;
        prop_assert!(sum <= hu + hv + 1e-9);
        prop_assert!(close(g_height(f, &g_sub(f, &u, &u)).unwrap().value, 0.0));
    }

    #[test]
    fn place_vector_integrates_to_zero_and_matches_height(x in coords(4)) {
        let f = &biquad().field;
        let ps = PlaceSpace::new(f);
        let u = GElement::of(f, nonzero(f, &x)).unwrap();
        let v = ps.f_vector(&u).unwrap();
        prop_assert!(v.integral().value.abs() <= 1e-9 * (1.0 + v.l1_norm().value));
        prop_assert!(close(v.l1_norm().value, 2.0 * g_height(f, &u).unwrap().value));
        for s in 0..f.group_order() {
            let moved = ps.permute_by_automorphism(&v, s).unwrap();
            prop_assert!(close(moved.l1_norm().value, v.l1_norm().value));
            let direct = ps.f_vector(&u.apply_automorphism(f, s)).unwrap();
            for (id, e) in &direct.entries {
                let m = moved.entries.get(id).map_or(0.0, |x| x.value);
                prop_assert!(close(m, e.value));
            }
        }
    }

    #[test]
    fn projections_are_idempotent_complementary(x in coords(4), k in 0usize..3) {
        let sc = biquad();
        let f = &sc.field;
        let k = sc.subfield(["K1", "K2", "K3"][k]).unwrap();
        let u = GElement::of(f, nonzero(f, &x)).unwrap();
        let s = s_project(f, &u, k);
        let t = t_project(f, &u, k);
        prop_assert!(g_equal(f, &s_project(f, &s, k), &s));
        prop_assert!(g_equal(f, &t_project(f, &t, k), &t));
        prop_assert!(g_equal(f, &g_combine(f, &[s.clone(), t.clone()]), &u));
        prop_assert!(s_project(f, &t, k).is_zero());
        prop_assert!(t_project(f, &s, k).is_zero());
    }

    #[test]
    fn delta_ignores_powers_and_torsion(x in coords(2), n in 1i64..4, j in 0i64..6) {
        let sc = eisenstein();
        let f = &sc.field;
        let k = sc.subfield("Q").unwrap();
        let a = nonzero(f, &x);
        let d = delta_k(f, &a, k).unwrap();
        prop_assert_eq!(delta_k(f, &f.pow(&a, n), k).unwrap(), d);
        let z = f.pow(f.torsion_generator(), j);
        prop_assert_eq!(delta_k(f, &f.mul(&a, &z), k).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn valuations_are_additive(x in coords(4), y in coords(4), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let f = &biquad().field;
        let ps = PlaceSpace::new(f);
        let (a, b) = (nonzero(f, &x), nonzero(f, &y));
        let lp = ps.local(p).unwrap();
        let va = lp.valuations(f, &a).unwrap();
        let vb = lp.valuations(f, &b).unwrap();
        let vab = lp.valuations(f, &f.mul(&a, &b)).unwrap();
        for i in 0..vab.len() {
            prop_assert_eq!(vab[i], va[i] + vb[i]);
        }
    }
}

#[test]
fn place_weights_partition_each_fiber() {
    for sc in [biquad(), eisenstein()] {
        let ps = PlaceSpace::new(&sc.field);
        assert!(weights_partition(&ps, &[2, 3, 5, 7, 11, 13]).unwrap());
    }
}
