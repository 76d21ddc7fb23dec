//! Command dispatch: every command produces one JSON report.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::corpus::bundled_corpus;
use super::scenario::{Scenario, Suite};
use super::verify::{random_gelement, run_check, run_suite_on, verify_scenarios, SuiteReport, VerifyOptions};
use crate::error::{Error, Result};
use crate::heights::{g_height, is_torsion, GElement};
use crate::json::{element_json, gelement_json, height_json, q_json, real_str};
use crate::numberfield::galois::galois_condition;
use crate::numberfield::{FieldElement, Subfield};
use crate::orbits::{orbit_mod_torsion, vk_bounds};
use crate::placespace::{places, PlaceId, PlaceSpace};
use crate::projections::{
    check_commutes, composite_project, is_member, s_project, t_project, ProjectionSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Height,
    Torsion,
    Orbit,
    Delta,
    Width,
    VkBounds,
    Places,
    FVector,
    Project,
    Member,
    Decompose,
    Commutes,
    Verify,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Height,
        Command::Torsion,
        Command::Orbit,
        Command::Delta,
        Command::Width,
        Command::VkBounds,
        Command::Places,
        Command::FVector,
        Command::Project,
        Command::Member,
        Command::Decompose,
        Command::Commutes,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Height => "height",
            Command::Torsion => "torsion",
            Command::Orbit => "orbit",
            Command::Delta => "delta",
            Command::Width => "width",
            Command::VkBounds => "vk-bounds",
            Command::Places => "places",
            Command::FVector => "fvector",
            Command::Project => "project",
            Command::Member => "member",
            Command::Decompose => "decompose",
            Command::Commutes => "commutes",
            Command::Verify => "verify",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.iter().copied().find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default)]
pub struct CommandArgs {
    pub element: Option<String>,
    pub field_list: Vec<String>,
    pub fields_d: Vec<String>,
    pub fields_e: Vec<String>,
    /// suite name or "all", for `verify`
    pub suite: Option<String>,
    pub tolerance: Option<f64>,
    pub precision: Option<u32>,
    /// condition violations become refusals
    pub strict: bool,
}

/// Splits a comma separated name list.
pub fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn need_scenario(sc: Option<&Scenario>, cmd: Command) -> Result<&Scenario> {
    sc.ok_or_else(|| Error::InvalidInput(format!("'{}' needs --scenario", cmd)))
}

fn element<'a>(sc: &'a Scenario, args: &CommandArgs, cmd: Command) -> Result<(&'a str, &'a str, &'a FieldElement)> {
    let name = args.element.as_deref().ok_or_else(|| Error::InvalidInput(format!("'{}' needs an element", cmd)))?;
    sc.elements
        .iter()
        .find(|(n, _, _)| n == name)
        .map(|(n, src, a)| (n.as_str(), src.as_str(), a))
        .ok_or_else(|| Error::InvalidInput(format!("unknown element '{}'", name)))
}

fn gelement(sc: &Scenario, a: &FieldElement) -> Result<GElement> {
    GElement::of(&sc.field, a.clone())
}

/// Named subfields from --field-list, or all declared subfields.
fn listed_fields<'a>(sc: &'a Scenario, args: &CommandArgs) -> Result<Vec<(&'a str, &'a Subfield)>> {
    if args.field_list.is_empty() {
        return Ok(sc.subfields.iter().map(|(n, k)| (n.as_str(), k)).collect());
    }
    args.field_list
        .iter()
        .map(|n| {
            sc.subfields
                .iter()
                .find(|(m, _)| m == n)
                .map(|(m, k)| (m.as_str(), k))
                .ok_or_else(|| Error::InvalidInput(format!("unknown subfield '{}'", n)))
        })
        .collect()
}

fn projection_spec(sc: &Scenario, args: &CommandArgs) -> Result<ProjectionSpec> {
    let pick = |names: &[String]| names.iter().map(|n| sc.subfield(n).cloned()).collect::<Result<Vec<_>>>();
    Ok(ProjectionSpec::new(pick(&args.fields_d)?, pick(&args.fields_e)?))
}

fn strict_check(sc: &Scenario, spec: &ProjectionSpec, args: &CommandArgs) -> Result<bool> {
    let violating = spec.condition_violating(&sc.field);
    if violating && args.strict {
        return Err(Error::ConditionViolated);
    }
    Ok(violating)
}

fn field_header(sc: &Scenario) -> Value {
    let f = &sc.field;
    json!({
        "scenario": sc.name,
        "defining_polynomial": f.defining_poly().coeffs().iter().map(q_json).collect::<Vec<_>>(),
        "degree": f.degree(),
        "torsion_order": f.torsion_order(),
    })
}

fn with_header(sc: &Scenario, cmd: Command, mut body: Value) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("command".into(), json!(cmd.name()));
        m.insert("field".into(), field_header(sc));
    }
    body
}

/// Executes one command. `scenario` is required by every command except
/// `verify`, which falls back to the bundled corpus.
pub fn run_command(cmd: Command, scenario: Option<&Scenario>, args: &CommandArgs) -> Result<Value> {
    if cmd == Command::Verify {
        return verify(scenario, args);
    }
    let sc = need_scenario(scenario, cmd)?;
    let f = &sc.field;
    let body = match cmd {
        Command::Height => {
            let (name, src, a) = element(sc, args, cmd)?;
            let h = g_height(f, &gelement(sc, a)?)?;
            json!({ "element": name, "expr": src, "value": real_str(h.value), "abs_error": real_str(h.abs_error) })
        }
        Command::Torsion => match args.element {
            Some(_) => {
                let (name, src, a) = element(sc, args, cmd)?;
                json!({ "element": name, "expr": src, "is_torsion": is_torsion(f, a)? })
            }
            None => json!({ "generator": f.torsion_generator().to_string() }),
        },
        Command::Orbit | Command::Delta | Command::Width | Command::VkBounds => {
            let (name, src, a) = element(sc, args, cmd)?;
            let mut rows = Vec::new();
            for (kn, k) in listed_fields(sc, args)? {
                let row = match cmd {
                    Command::Orbit => {
                        let r = orbit_mod_torsion(f, a, k)?;
                        json!({
                            "subfield": kn,
                            "delta": r.delta,
                            "conjugate_count": r.conjugate_count,
                            "representatives": r.representatives.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "width": height_json(&r.width),
                            "norm_element": element_json(&r.norm_element),
                        })
                    }
                    Command::Delta => json!({ "subfield": kn, "delta": orbit_mod_torsion(f, a, k)?.delta }),
                    Command::Width => json!({ "subfield": kn, "width": height_json(&orbit_mod_torsion(f, a, k)?.width) }),
                    _ => {
                        let b = vk_bounds(f, a, k)?;
                        json!({
                            "subfield": kn,
                            "lower": height_json(&b.lower),
                            "upper": height_json(&b.upper),
                            "label": format!("V_K ∈ [{}, {}]", real_str(b.lower.value), real_str(b.upper.value)),
                        })
                    }
                };
                rows.push(row);
            }
            json!({ "element": name, "expr": src, "results": rows })
        }
        Command::Places => {
            let ps = PlaceSpace::new(f);
            let arch: Vec<Value> = places(f)
                .iter()
                .map(|(id, w)| {
                    let class = match id {
                        PlaceId::Archimedean { class } => *class,
                        PlaceId::Finite { .. } => unreachable!(),
                    };
                    let kind = if class < f.real_places() { "real" } else { "complex" };
                    json!({ "id": class, "kind": kind, "weight": q_json(w) })
                })
                .collect();
            let mut finite = Vec::new();
            if args.element.is_some() {
                let (_, _, a) = element(sc, args, cmd)?;
                for p in ps.touched_primes(a)? {
                    for (id, e, fd, w) in ps.finite_places(p)? {
                        let ideal = match id {
                            PlaceId::Finite { ideal, .. } => ideal,
                            PlaceId::Archimedean { .. } => unreachable!(),
                        };
                        finite.push(json!({ "p": p, "ideal": ideal, "e": e, "f": fd, "weight": q_json(&w) }));
                    }
                }
            }
            json!({ "element": args.element, "arch": arch, "finite": finite })
        }
        Command::FVector => {
            let (name, src, a) = element(sc, args, cmd)?;
            let v = PlaceSpace::new(f).f_vector(&gelement(sc, a)?)?;
            json!({ "element": name, "expr": src, "fvector": v.to_json() })
        }
        Command::Project => {
            let (name, src, a) = element(sc, args, cmd)?;
            let spec = projection_spec(sc, args)?;
            if spec.is_empty() {
                return Err(Error::InvalidInput("'project' needs --D or --E".into()));
            }
            let violating = strict_check(sc, &spec, args)?;
            let u = gelement(sc, a)?;
            let mut parts = Vec::new();
            for n in &args.fields_d {
                parts.push(json!({ "subfield": n, "operator": "S", "image": gelement_json(&s_project(f, &u, sc.subfield(n)?)) }));
            }
            for n in &args.fields_e {
                parts.push(json!({ "subfield": n, "operator": "T", "image": gelement_json(&t_project(f, &u, sc.subfield(n)?)) }));
            }
            json!({
                "element": name,
                "expr": src,
                "projections": parts,
                "composite": gelement_json(&composite_project(f, &u, &spec)),
                "condition_violating": violating,
            })
        }
        Command::Member | Command::Decompose => {
            let (name, src, a) = element(sc, args, cmd)?;
            if cmd == Command::Member && !args.fields_e.is_empty() {
                return Err(Error::InvalidInput("'member' takes only --D; use 'decompose'".into()));
            }
            let spec = projection_spec(sc, args)?;
            if spec.is_empty() {
                return Err(Error::InvalidInput(format!("'{}' needs --D or --E", cmd)));
            }
            strict_check(sc, &spec, args)?;
            let r = is_member(f, &gelement(sc, a)?, &spec)?;
            let mut v = r.to_json(&args.fields_d);
            if let Value::Object(m) = &mut v {
                m.insert("element".into(), json!(name));
                m.insert("expr".into(), json!(src));
                m.insert("D".into(), json!(args.fields_d));
                m.insert("E".into(), json!(args.fields_e));
            }
            v
        }
        Command::Commutes => {
            if args.field_list.len() != 2 {
                return Err(Error::InvalidInput("'commutes' needs exactly two names in --field-list".into()));
            }
            let (k1, k2) = (sc.subfield(&args.field_list[0])?, sc.subfield(&args.field_list[1])?);
            let condition = galois_condition(f, k1, k2);
            if !condition && args.strict {
                return Err(Error::ConditionViolated);
            }
            let mut testset: Vec<GElement> =
                sc.elements.iter().filter(|e| !e.2.is_zero()).map(|e| gelement(sc, &e.2)).collect::<Result<_>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(VerifyOptions::default().seed);
            for _ in 0..50 {
                testset.push(random_gelement(sc, &mut rng));
            }
            json!({
                "fields": args.field_list,
                "galois_condition": condition,
                "commutes": check_commutes(f, k1, k2, &testset),
                "tested": testset.len(),
            })
        }
        Command::Verify => unreachable!(),
    };
    Ok(with_header(sc, cmd, body))
}

fn verify(scenario: Option<&Scenario>, args: &CommandArgs) -> Result<Value> {
    let mut opts = VerifyOptions::default();
    if let Some(t) = args.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidInput("tolerance must be a non-negative number".into()));
        }
        opts.tolerance = t;
    }
    let suite = match args.suite.as_deref() {
        None | Some("all") => None,
        Some(s) => Some(Suite::from_name(s).ok_or_else(|| Error::InvalidInput(format!("unknown suite '{}'", s)))?),
    };
    let reports: Vec<SuiteReport> = match scenario {
        Some(sc) => match suite {
            None => sc.checks.iter().map(|c| run_check(sc, c, &opts)).collect::<Result<_>>()?,
            Some(s) => vec![run_suite_on(sc, s, &opts)?],
        },
        None => {
            let corpus = bundled_corpus(args.precision)?;
            match suite {
                None => verify_scenarios(&corpus, &opts)?,
                Some(s) => corpus
                    .iter()
                    .filter(|sc| sc.checks.iter().any(|c| c.suite == s))
                    .map(|sc| run_suite_on(sc, s, &opts))
                    .collect::<Result<_>>()?,
            }
        }
    };
    let table: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{:<22} {:<14} {:>5} cases  {}",
                r.suite.name(),
                r.scenario,
                r.cases,
                if r.passed() { "PASS" } else { "FAIL" }
            )
        })
        .collect();
    Ok(json!({
        "command": "verify",
        "tolerance": real_str(opts.tolerance),
        "passed": reports.iter().all(SuiteReport::passed),
        "table": table,
        "reports": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    }))
}
