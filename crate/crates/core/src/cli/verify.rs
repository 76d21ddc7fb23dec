//! The verification suites. Each suite runs against one scenario and
//! reports the number of cases checked, any failures, and observations
//! that are recorded without being asserted.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::scenario::{CheckSpec, Scenario, Suite};
use crate::arith::{q_valuation, Q};
use crate::error::{Error, Result};
use crate::heights::{g_combine, g_equal, g_height, GElement};
use crate::numberfield::galois::{conjugate_subgroup, galois_condition};
use crate::numberfield::{FieldElement, Subfield, WorkingField};
use crate::orbits::{degree_of_power, delta_k, vk_bounds};
use crate::placespace::{weights_partition, PlaceSpace};
use crate::projections::{
    check_commutes, check_conjugation, composite_project, fixed_by_orbit, is_member, operator_norm_check,
    s_project, t_project, two_field_expansion, verify_witness, ProjectionSpec,
};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: 1e-9, seed: 20240611 }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub scenario: String,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Outcomes outside any guarantee, recorded but not asserted.
    pub observations: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, sc: &Scenario) -> Self {
        SuiteReport { suite, scenario: sc.name.clone(), cases: 0, failures: Vec::new(), observations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        self.failures.push(what);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "scenario": self.scenario,
            "passed": self.passed(),
            "cases": self.cases,
            "failures": self.failures,
            "observations": self.observations,
        })
    }
}

fn param_usize(p: &Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match p.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::SchemaError(format!("parameter '{}' must be a non-negative integer", key))),
    }
}

fn param_names(p: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    match p.get(key) {
        None => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()),
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::SchemaError(format!("parameter '{}' must list names", key)))
            })
            .collect(),
        Some(_) => Err(Error::SchemaError(format!("parameter '{}' must list names", key))),
    }
}

fn fields(sc: &Scenario, names: &[String]) -> Result<Vec<Subfield>> {
    names.iter().map(|n| sc.subfield(n).cloned()).collect()
}

fn scenario_seed(opts: &VerifyOptions, sc: &Scenario, suite: Suite) -> u64 {
    // FNV-1a over the scenario and suite names
    let mut h: u64 = 0xcbf29ce484222325;
    for b in sc.name.bytes().chain(suite.name().bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ opts.seed
}

fn nonzero_elements(sc: &Scenario) -> Vec<(&str, &FieldElement)> {
    sc.elements.iter().filter(|(_, _, a)| !a.is_zero()).map(|(n, _, a)| (n.as_str(), a)).collect()
}

/// Random torsion element `zeta^k`.
fn random_torsion(f: &WorkingField, rng: &mut ChaCha8Rng) -> FieldElement {
    let w = f.torsion_order() as i64;
    f.pow(f.torsion_generator(), rng.gen_range(0..w))
}

/// Product of one or two corpus elements to small nonzero powers, times
/// a random root of unity.
pub fn random_element(sc: &Scenario, rng: &mut ChaCha8Rng) -> FieldElement {
    let f = &sc.field;
    let pool = nonzero_elements(sc);
    let mut x = random_torsion(f, rng);
    if pool.is_empty() {
        return x;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let (_, a) = pool[rng.gen_range(0..pool.len())];
        let e = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        x = f.mul(&x, &f.pow(a, e));
    }
    x
}

/// Random group element with scale `1/n`, n in 1..=3.
pub fn random_gelement(sc: &Scenario, rng: &mut ChaCha8Rng) -> GElement {
    let a = random_element(sc, rng);
    let n = rng.gen_range(1..=3i64);
    GElement::new(&sc.field, Q::new(BigInt::from(1), BigInt::from(n)), a).expect("nonzero")
}

/// Random nonzero element of K: a product over the generators of small
/// integer polynomials in each generator.
pub fn random_in_subfield(f: &WorkingField, k: &Subfield, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let mut x = f.from_int(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
        for g in k.generators() {
            let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            let p = f.from_int(c[0]).add(&f.mul(g, &f.from_int(c[1]))).add(&f.mul(&f.mul(g, g), &f.from_int(c[2])));
            x = f.mul(&x, &p);
        }
        if !x.is_zero() {
            return x;
        }
    }
}

/// Runs a declared check.
pub fn run_check(sc: &Scenario, check: &CheckSpec, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(check.suite, sc);
    let mut rng = ChaCha8Rng::seed_from_u64(scenario_seed(opts, sc, check.suite));
    let p = &check.params;
    match check.suite {
        Suite::BackendAgreement => backend_agreement(sc, opts, &mut rep),
        Suite::ProductFormula => product_formula(sc, opts, &mut rep),
        Suite::VkSandwich => vk_sandwich(sc, &mut rep),
        Suite::OrbitDelta => orbit_delta(sc, param_usize(p, "tuples", 40)?, &mut rng, &mut rep),
        Suite::ProjectionLaws => projection_laws(sc, opts, &mut rng, &mut rep),
        Suite::Commutativity => commutativity(sc, param_usize(p, "random", 50)?, &mut rng, &mut rep),
        Suite::Membership => membership(sc, p, &mut rng, &mut rep)?,
        Suite::MixedDecomposition => mixed_decomposition(sc, p, &mut rng, &mut rep)?,
        Suite::Conjugation => conjugation(sc, p, &mut rng, &mut rep)?,
        Suite::ValuationConsistency => valuation_consistency(sc, &mut rep),
    }
    Ok(rep)
}

/// Runs a suite with the parameters the scenario declares for it, or
/// defaults when the scenario does not declare it.
pub fn run_suite_on(sc: &Scenario, suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let declared = sc.checks.iter().find(|c| c.suite == suite).cloned();
    run_check(sc, &declared.unwrap_or(CheckSpec { suite, params: Map::new() }), opts)
}

fn backend_agreement(sc: &Scenario, opts: &VerifyOptions, rep: &mut SuiteReport) {
    let f = &sc.field;
    let ps = PlaceSpace::new(f);
    for (name, a) in nonzero_elements(sc) {
        let u = GElement::of(f, a.clone()).expect("nonzero");
        let outcome = g_height(f, &u).and_then(|h| ps.f_vector(&u).map(|v| (h, v.l1_norm())));
        match outcome {
            Ok((h, l1)) => {
                let bound = opts.tolerance + l1.abs_error + 2.0 * h.abs_error;
                let diff = (l1.value - 2.0 * h.value).abs();
                rep.check(diff <= bound, || {
                    format!("{}: l1 norm {} vs twice height {} (diff {:e})", name, l1.value, 2.0 * h.value, diff)
                });
            }
            Err(e) => rep.fail(format!("{}: {}", name, e)),
        }
    }
}

fn product_formula(sc: &Scenario, opts: &VerifyOptions, rep: &mut SuiteReport) {
    let f = &sc.field;
    let ps = PlaceSpace::new(f);
    for (name, a) in nonzero_elements(sc) {
        let u = GElement::of(f, a.clone()).expect("nonzero");
        match ps.f_vector(&u) {
            Ok(v) => {
                let i = v.integral();
                rep.check(i.value.abs() <= opts.tolerance, || format!("{}: integral {:e}", name, i.value));
            }
            Err(e) => rep.fail(format!("{}: {}", name, e)),
        }
    }
}

fn vk_sandwich(sc: &Scenario, rep: &mut SuiteReport) {
    let f = &sc.field;
    let mut tight = 0;
    let mut gaps = 0.0f64;
    for (name, a) in nonzero_elements(sc) {
        for (kn, k) in &sc.subfields {
            match vk_bounds(f, a, k) {
                Ok(b) => {
                    let slack = b.lower.abs_error + b.upper.abs_error;
                    rep.check(b.lower.value <= b.upper.value + slack, || {
                        format!("{} over {}: lower {} above upper {}", name, kn, b.lower.value, b.upper.value)
                    });
                    let gap = b.upper.value - b.lower.value;
                    if gap <= slack {
                        tight += 1;
                    }
                    gaps = gaps.max(gap);
                }
                Err(e) => rep.fail(format!("{} over {}: {}", name, kn, e)),
            }
        }
    }
    rep.observations.push(format!("{} of {} pairs have coinciding bounds; largest gap {:.6}", tight, rep.cases, gaps));
}

fn orbit_delta(sc: &Scenario, tuples: usize, rng: &mut ChaCha8Rng, rep: &mut SuiteReport) {
    let f = &sc.field;
    let pool = nonzero_elements(sc);
    if pool.is_empty() || sc.subfields.is_empty() {
        return;
    }
    let w = f.torsion_order() as i64;
    for _ in 0..tuples {
        let (name, a) = pool[rng.gen_range(0..pool.len())];
        let (kn, k) = &sc.subfields[rng.gen_range(0..sc.subfields.len())];
        let l = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let zeta = random_torsion(f, rng);
        let run = || -> Result<(usize, usize, usize, usize)> {
            let d = delta_k(f, a, k)?;
            let dl = delta_k(f, &f.pow(a, l), k)?;
            let dz = delta_k(f, &f.mul(a, &zeta), k)?;
            let oracle = degree_of_power(f, a, w, k)?;
            Ok((d, dl, dz, oracle))
        };
        match run() {
            Ok((d, dl, dz, oracle)) => rep.check(d == dl && d == dz && d == oracle, || {
                format!(
                    "{} over {} (l = {}): delta {}, of power {}, times torsion {}, degree of {}-th power {}",
                    name, kn, l, d, dl, dz, w, oracle
                )
            }),
            Err(e) => rep.fail(format!("{} over {}: {}", name, kn, e)),
        }
    }
}

fn projection_laws(sc: &Scenario, opts: &VerifyOptions, rng: &mut ChaCha8Rng, rep: &mut SuiteReport) {
    let f = &sc.field;
    let ps = PlaceSpace::new(f);
    let mut us: Vec<(String, GElement)> = nonzero_elements(sc)
        .into_iter()
        .map(|(n, a)| (n.to_string(), GElement::of(f, a.clone()).expect("nonzero")))
        .collect();
    for i in 0..5 {
        us.push((format!("random#{}", i), random_gelement(sc, rng)));
    }
    let zero = GElement::zero(f);
    for (name, u) in &us {
        for (kn, k) in &sc.subfields {
            let s = s_project(f, u, k);
            let t = t_project(f, u, k);
            rep.check(g_equal(f, &s_project(f, &s, k), &s), || format!("{} over {}: S not idempotent", name, kn));
            rep.check(g_equal(f, &t_project(f, &t, k), &t), || format!("{} over {}: T not idempotent", name, kn));
            rep.check(g_equal(f, &g_combine(f, &[s.clone(), t.clone()]), u), || {
                format!("{} over {}: S + T differs from the identity", name, kn)
            });
            rep.check(g_equal(f, &s_project(f, &t, k), &zero), || {
                format!("{} over {}: S does not annihilate the image of T", name, kn)
            });
            rep.check(g_equal(f, &s, u) == fixed_by_orbit(f, u, k), || {
                format!("{} over {}: fixed points of S disagree with the orbit criterion", name, kn)
            });
            match operator_norm_check(&ps, u, k) {
                Ok((img, src)) => {
                    let slack = opts.tolerance + img.abs_error + src.abs_error;
                    rep.check(img.value <= src.value + slack, || {
                        format!("{} over {}: norm grows from {} to {}", name, kn, src.value, img.value)
                    });
                }
                Err(e) => rep.fail(format!("{} over {}: {}", name, kn, e)),
            }
        }
    }
}

fn commutativity(sc: &Scenario, count: usize, rng: &mut ChaCha8Rng, rep: &mut SuiteReport) {
    let f = &sc.field;
    let testset: Vec<GElement> = (0..count).map(|_| random_gelement(sc, rng)).collect();
    for i in 0..sc.subfields.len() {
        for j in (i + 1)..sc.subfields.len() {
            let (n1, k1) = &sc.subfields[i];
            let (n2, k2) = &sc.subfields[j];
            let commutes = check_commutes(f, k1, k2, &testset);
            if !galois_condition(f, k1, k2) {
                rep.observations.push(format!(
                    "{} and {} violate the Galois condition; projections {} on {} elements",
                    n1,
                    n2,
                    if commutes { "commute" } else { "do not commute" },
                    testset.len()
                ));
                continue;
            }
            rep.check(commutes, || format!("{} and {}: projections do not commute", n1, n2));
            let spec = ProjectionSpec::new(vec![k1.clone(), k2.clone()], vec![]);
            for (idx, u) in testset.iter().enumerate() {
                rep.check(g_equal(f, &composite_project(f, u, &spec), &two_field_expansion(f, u, &spec)), || {
                    format!("{} and {}: two-field expansion differs on random#{}", n1, n2, idx)
                });
            }
        }
    }
}

fn membership(sc: &Scenario, p: &Map<String, Value>, rng: &mut ChaCha8Rng, rep: &mut SuiteReport) -> Result<()> {
    let f = &sc.field;
    let d_names = param_names(p, "D")?;
    if d_names.is_empty() {
        return Err(Error::SchemaError("membership needs parameter 'D'".into()));
    }
    let ks = fields(sc, &d_names)?;
    let spec = ProjectionSpec::new(ks.clone(), vec![]);
    let decide = |rep: &mut SuiteReport, label: &str, a: &FieldElement, expect: bool| {
        let u = match GElement::of(f, a.clone()) {
            Ok(u) => u,
            Err(e) => return rep.fail(format!("{}: {}", label, e)),
        };
        match is_member(f, &u, &spec) {
            Ok(r) => {
                rep.check(r.is_member == expect, || format!("{}: membership {} expected {}", label, r.is_member, expect));
                if expect {
                    let ok = r.witness.as_ref().is_some_and(|w| verify_witness(f, &u, &spec, w));
                    rep.check(ok, || format!("{}: witness missing or not verified", label));
                }
            }
            Err(e) => rep.fail(format!("{}: {}", label, e)),
        }
    };
    for n in param_names(p, "members")? {
        decide(rep, &n, sc.element(&n)?, true);
    }
    for n in param_names(p, "non_members")? {
        decide(rep, &n, sc.element(&n)?, false);
    }
    for i in 0..param_usize(p, "random", 20)? {
        let mut a = random_torsion(f, rng);
        for k in &ks {
            a = f.mul(&a, &random_in_subfield(f, k, rng));
        }
        decide(rep, &format!("random product #{}", i), &a, true);
    }
    Ok(())
}

fn mixed_decomposition(
    sc: &Scenario,
    p: &Map<String, Value>,
    rng: &mut ChaCha8Rng,
    rep: &mut SuiteReport,
) -> Result<()> {
    let f = &sc.field;
    let spec = ProjectionSpec::new(fields(sc, &param_names(p, "D")?)?, fields(sc, &param_names(p, "E")?)?);
    if spec.is_empty() {
        return Err(Error::SchemaError("mixed-decomposition needs parameters 'D' or 'E'".into()));
    }
    let zero = GElement::zero(f);
    let mut us: Vec<(String, GElement)> = nonzero_elements(sc)
        .into_iter()
        .map(|(n, a)| (n.to_string(), GElement::of(f, a.clone()).expect("nonzero")))
        .collect();
    for i in 0..param_usize(p, "random", 50)? {
        us.push((format!("random#{}", i), random_gelement(sc, rng)));
    }
    for (name, u) in &us {
        match is_member(f, u, &spec) {
            Ok(r) => {
                rep.check(g_equal(f, &g_combine(f, &[r.d_part.clone(), r.e_part.clone()]), u), || {
                    format!("{}: parts do not recombine", name)
                });
                rep.check(g_equal(f, &composite_project(f, &r.d_part, &spec), &r.d_part), || {
                    format!("{}: composite does not fix the first part", name)
                });
                rep.check(g_equal(f, &composite_project(f, &r.e_part, &spec), &zero), || {
                    format!("{}: composite does not annihilate the second part", name)
                });
            }
            Err(e) => rep.fail(format!("{}: {}", name, e)),
        }
    }
    Ok(())
}

fn conjugation(sc: &Scenario, p: &Map<String, Value>, rng: &mut ChaCha8Rng, rep: &mut SuiteReport) -> Result<()> {
    let f = &sc.field;
    let kn = p.get("K").and_then(Value::as_str).ok_or(Error::SchemaError("conjugation needs 'K'".into()))?;
    let ln = p.get("L").and_then(Value::as_str).ok_or(Error::SchemaError("conjugation needs 'L'".into()))?;
    let (k, l) = (sc.subfield(kn)?, sc.subfield(ln)?);
    let conjugating: Vec<usize> = (0..f.group_order())
        .filter(|&s| conjugate_subgroup(f, k.fixing_group(), s) == l.fixing_group())
        .collect();
    // prefer an automorphism carrying the first generator of K onto that of L
    let sigma = conjugating
        .iter()
        .copied()
        .find(|&s| match (k.generators().first(), l.generators().first()) {
            (Some(a), Some(b)) => f.apply_automorphism(s, a) == *b,
            _ => false,
        })
        .or(conjugating.first().copied());
    let Some(sigma) = sigma else {
        rep.fail(format!("no automorphism conjugates {} onto {}", kn, ln));
        return Ok(());
    };
    let mut testset: Vec<GElement> =
        nonzero_elements(sc).into_iter().map(|(_, a)| GElement::of(f, a.clone()).expect("nonzero")).collect();
    for _ in 0..param_usize(p, "random", 20)? {
        testset.push(random_gelement(sc, rng));
    }
    for (i, u) in testset.iter().enumerate() {
        match check_conjugation(f, k, l, sigma, std::slice::from_ref(u)) {
            Ok(ok) => rep.check(ok, || format!("element #{}: conjugation identity fails", i)),
            Err(e) => rep.fail(format!("element #{}: {}", i, e)),
        }
    }
    if let Some(bad) = (0..f.group_order()).find(|s| !conjugating.contains(s)) {
        let refused = matches!(check_conjugation(f, k, l, bad, &testset[..1]), Err(Error::NotConjugate));
        rep.check(refused, || format!("automorphism #{} was not refused", bad));
    }
    Ok(())
}

fn valuation_consistency(sc: &Scenario, rep: &mut SuiteReport) {
    let f = &sc.field;
    let ps = PlaceSpace::new(f);
    let d = f.degree() as u32;
    let mut all_primes = Vec::new();
    for (name, a) in nonzero_elements(sc) {
        let primes = match ps.touched_primes(a) {
            Ok(p) => p,
            Err(e) => {
                rep.fail(format!("{}: {}", name, e));
                continue;
            }
        };
        let norm = f.norm(a);
        for p in primes {
            all_primes.push(p);
            match ps.local_factorization(a, &BigInt::from(p)) {
                Ok(lf) => {
                    let sum: i64 = lf.factors.iter().map(|x| x.f as i64 * x.valuation).sum();
                    let expected = q_valuation(&norm, &BigInt::from(p));
                    rep.check(sum == expected, || {
                        format!("{} at {}: sum of f v is {}, norm valuation {}", name, p, sum, expected)
                    });
                    let ef: u32 = lf.factors.iter().map(|x| x.e * x.f).sum();
                    rep.check(ef == d, || format!("{} at {}: sum of e f is {}", name, p, ef));
                }
                Err(e) => rep.fail(format!("{} at {}: {}", name, p, e)),
            }
        }
    }
    all_primes.sort();
    all_primes.dedup();
    match weights_partition(&ps, &all_primes) {
        Ok(ok) => rep.check(ok, || "place weights do not sum to one on every fiber".into()),
        Err(e) => rep.fail(e.to_string()),
    }
    rep.observations.push(format!("primes touched: {:?}", all_primes));
}

/// Runs every declared check of every scenario, one thread per scenario;
/// reports come back in scenario order, then declaration order.
pub fn verify_scenarios(scenarios: &[Scenario], opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    let results: Vec<Result<Vec<SuiteReport>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|sc| scope.spawn(move || sc.checks.iter().map(|c| run_check(sc, c, opts)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
