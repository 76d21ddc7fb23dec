//! Acceptance criteria over the bundled corpus. Prints one PASS/FAIL line
//! per criterion and exits nonzero if any criterion fails.

use std::process::ExitCode;

use heightlab::cli::verify::{run_suite_on, SuiteReport, VerifyOptions};
use heightlab::cli::{bundled_corpus, Scenario, Suite};
use heightlab::heights::GElement;
use heightlab::orbits::vk_bounds;
use heightlab::projections::{is_member, verify_witness, ProjectionSpec};

const TOLERANCE: f64 = 1e-9;

struct Outcome {
    ok: bool,
    detail: String,
}

fn scenario<'a>(corpus: &'a [Scenario], name: &str) -> &'a Scenario {
    corpus.iter().find(|s| s.name == name).expect("bundled scenario")
}

/// Runs a suite over the given scenarios and folds the reports.
fn suite(corpus: &[&Scenario], s: Suite) -> (Vec<SuiteReport>, Outcome) {
    let opts = VerifyOptions { tolerance: TOLERANCE, ..VerifyOptions::default() };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for sc in corpus {
        match run_suite_on(sc, s, &opts) {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(format!("{}: {}", sc.name, e)),
        }
    }
    for r in &reports {
        failures.extend(r.failures.iter().take(3).map(|f| format!("{}: {}", r.scenario, f)));
    }
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let ok = failures.is_empty();
    let detail = if ok { format!("{} cases", cases) } else { format!("{} cases; {}", cases, failures.join("; ")) };
    (reports, Outcome { ok, detail })
}

fn all(corpus: &[Scenario]) -> Vec<&Scenario> {
    corpus.iter().collect()
}

fn element_count(corpus: &[Scenario]) -> usize {
    corpus.iter().map(|s| s.elements.iter().filter(|e| !e.2.is_zero()).count()).sum()
}

fn with_minimum(mut o: Outcome, count: usize, min: usize, what: &str) -> Outcome {
    if count < min {
        o.ok = false;
        o.detail = format!("{}; only {} {} (need {})", o.detail, count, what, min);
    }
    o
}

fn backend_agreement(corpus: &[Scenario]) -> Outcome {
    let (_, o) = suite(&all(corpus), Suite::BackendAgreement);
    with_minimum(o, element_count(corpus), 100, "corpus elements")
}

fn product_formula(corpus: &[Scenario]) -> Outcome {
    let (_, o) = suite(&all(corpus), Suite::ProductFormula);
    with_minimum(o, element_count(corpus), 100, "corpus elements")
}

fn sandwich(corpus: &[Scenario]) -> Outcome {
    let (_, mut o) = suite(&all(corpus), Suite::VkSandwich);
    let sc = scenario(corpus, "sqrt2");
    let expected = 0.5 * (1.0 + 2f64.sqrt()).ln();
    let b = vk_bounds(&sc.field, sc.element("a").unwrap(), sc.subfield("Q").unwrap()).unwrap();
    let anchored = (b.lower.value - expected).abs() <= TOLERANCE && (b.upper.value - expected).abs() <= TOLERANCE;
    o.detail = format!("{}; 1+sqrt2 over Q in [{}, {}]", o.detail, b.lower.value, b.upper.value);
    o.ok &= anchored;
    o
}

fn orbit_delta(corpus: &[Scenario]) -> Outcome {
    let (reports, o) = suite(&all(corpus), Suite::OrbitDelta);
    let tuples = reports.iter().map(|r| r.cases).sum();
    with_minimum(o, tuples, 200, "tuples")
}

fn projection_laws(corpus: &[Scenario]) -> Outcome {
    suite(&all(corpus), Suite::ProjectionLaws).1
}

fn commutativity(corpus: &[Scenario]) -> Outcome {
    let (reports, mut o) = suite(&all(corpus), Suite::Commutativity);
    let observed: Vec<String> = reports.iter().flat_map(|r| r.observations.iter().cloned()).collect();
    if !observed.is_empty() {
        o.detail = format!("{}; outside the condition: {}", o.detail, observed.join("; "));
    }
    o
}

fn membership(corpus: &[Scenario]) -> Outcome {
    let sc = scenario(corpus, "biquadratic");
    let f = &sc.field;
    let spec = ProjectionSpec::new(vec![sc.subfield("K1").unwrap().clone(), sc.subfield("K2").unwrap().clone()], vec![]);
    let sqrt6 = GElement::of(f, sc.element("sqrt6").unwrap().clone()).unwrap();
    let r = is_member(f, &sqrt6, &spec).unwrap();
    let sqrt6_ok = r.is_member && r.witness.as_ref().is_some_and(|w| verify_witness(f, &sqrt6, &spec, w));
    let sum = GElement::of(f, sc.element("sqrt2_plus_sqrt3").unwrap().clone()).unwrap();
    let sum_ok = !is_member(f, &sum, &spec).unwrap().is_member;
    let (_, mut o) = suite(&[sc], Suite::Membership);
    o.ok &= sqrt6_ok && sum_ok;
    o.detail = format!("{}; sqrt6 member {}, sqrt2+sqrt3 rejected {}", o.detail, sqrt6_ok, sum_ok);
    let random = sc.checks.iter().find(|c| c.suite == Suite::Membership).and_then(|c| c.params.get("random"));
    let random = random.and_then(|v| v.as_u64()).unwrap_or(0) as usize;
    with_minimum(o, random, 20, "random products")
}

fn mixed_decomposition(corpus: &[Scenario]) -> Outcome {
    let sc = scenario(corpus, "biquadratic");
    let (_, o) = suite(&[sc], Suite::MixedDecomposition);
    let random = sc.checks.iter().find(|c| c.suite == Suite::MixedDecomposition).and_then(|c| c.params.get("random"));
    let random = random.and_then(|v| v.as_u64()).unwrap_or(0) as usize;
    with_minimum(o, random, 50, "random elements")
}

fn conjugation(corpus: &[Scenario]) -> Outcome {
    let sc = scenario(corpus, "cube_root_two");
    let f = &sc.field;
    let (k1, k2) = (&sc.subfields[1], &sc.subfields[2]);
    let (cbrt2, wcbrt2) = (sc.element("cbrt2").unwrap(), sc.element("omega_cbrt2").unwrap());
    let mapped = (0..f.group_order()).any(|s| f.apply_automorphism(s, cbrt2) == *wcbrt2);
    let (reports, mut o) = suite(&[sc], Suite::Conjugation);
    o.ok &= mapped && k1.0 == "K1" && k2.0 == "K2";
    let cases = reports.iter().map(|r| r.cases).sum();
    with_minimum(o, cases, 20, "elements")
}

fn valuation_consistency(corpus: &[Scenario]) -> Outcome {
    suite(&all(corpus), Suite::ValuationConsistency).1
}

type Criterion = (&'static str, fn(&[Scenario]) -> Outcome);

const CRITERIA: [Criterion; 10] = [
    ("height backend agreement", backend_agreement),
    ("product formula", product_formula),
    ("width sandwich", sandwich),
    ("orbit size invariance", orbit_delta),
    ("projection laws", projection_laws),
    ("commutativity under the Galois condition", commutativity),
    ("membership with witnesses", membership),
    ("mixed decomposition", mixed_decomposition),
    ("conjugation", conjugation),
    ("valuation consistency", valuation_consistency),
];

fn main() -> ExitCode {
    let corpus = bundled_corpus(None).expect("bundled corpus loads");
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|(_, run)| s.spawn(|| run(&corpus))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or(Outcome { ok: false, detail: "panicked".into() }))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), o)) in CRITERIA.iter().zip(&outcomes).enumerate() {
        println!("{:>2} {} {}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, name, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} passed, {} failed", CRITERIA.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
