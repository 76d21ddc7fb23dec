//! Scenario documents: a defining polynomial, named subfields, named
//! elements and the verification suites the scenario declares.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::{Map, Value};

use super::expr;
use crate::error::{Error, Result};
use crate::numberfield::{subfield, FieldElement, Poly, Subfield, WorkingField};

/// Verification suites, one per acceptance criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    BackendAgreement,
    ProductFormula,
    VkSandwich,
    OrbitDelta,
    ProjectionLaws,
    Commutativity,
    Membership,
    MixedDecomposition,
    Conjugation,
    ValuationConsistency,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::BackendAgreement,
        Suite::ProductFormula,
        Suite::VkSandwich,
        Suite::OrbitDelta,
        Suite::ProjectionLaws,
        Suite::Commutativity,
        Suite::Membership,
        Suite::MixedDecomposition,
        Suite::Conjugation,
        Suite::ValuationConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BackendAgreement => "backend-agreement",
            Suite::ProductFormula => "product-formula",
            Suite::VkSandwich => "vk-sandwich",
            Suite::OrbitDelta => "orbit-delta",
            Suite::ProjectionLaws => "projection-laws",
            Suite::Commutativity => "commutativity",
            Suite::Membership => "membership",
            Suite::MixedDecomposition => "mixed-decomposition",
            Suite::Conjugation => "conjugation",
            Suite::ValuationConsistency => "valuation-consistency",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub suite: Suite,
    pub params: Map<String, Value>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub field: WorkingField,
    pub subfields: Vec<(String, Subfield)>,
    /// name, source expression, value
    pub elements: Vec<(String, String, FieldElement)>,
    pub checks: Vec<CheckSpec>,
}

impl Scenario {
    pub fn subfield(&self, name: &str) -> Result<&Subfield> {
        self.subfields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, k)| k)
            .ok_or_else(|| Error::InvalidInput(format!("unknown subfield '{}'", name)))
    }

    pub fn element(&self, name: &str) -> Result<&FieldElement> {
        self.elements
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, a)| a)
            .ok_or_else(|| Error::InvalidInput(format!("unknown element '{}'", name)))
    }

    pub fn subfield_names(&self) -> Vec<String> {
        self.subfields.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// A JSON object kept in document order that rejects repeated keys.
struct UniqueMap<T>(Vec<(String, T)>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for UniqueMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V<T>(PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = UniqueMap<T>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with unique keys")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out: Vec<(String, T)> = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, T>()? {
                    if out.iter().any(|(x, _)| *x == k) {
                        return Err(de::Error::custom(format!("duplicate name '{}'", k)));
                    }
                    out.push((k, v));
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetailedCheck {
    suite: String,
    #[serde(default)]
    params: Map<String, Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCheck {
    Name(String),
    Detailed(DetailedCheck),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    v: u32,
    #[serde(default)]
    name: Option<String>,
    field: Vec<Coefficient>,
    #[serde(default)]
    subfields: Option<UniqueMap<Vec<String>>>,
    #[serde(default)]
    elements: Option<UniqueMap<String>>,
    #[serde(default)]
    checks: Vec<RawCheck>,
}

fn json_error(e: serde_json::Error, text: &str) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof => {
            // serde_json reports 1-based line and column
            let offset = text
                .split_inclusive('\n')
                .take(e.line().saturating_sub(1))
                .map(str::len)
                .sum::<usize>()
                + e.column().saturating_sub(1);
            Error::ParseError { offset, message: format!("malformed JSON: {}", e) }
        }
        _ => Error::SchemaError(e.to_string()),
    }
}

fn with_context(e: Error, what: &str) -> Error {
    match e {
        Error::ParseError { offset, message } => Error::ParseError { offset, message: format!("{}: {}", what, message) },
        Error::EvalError(m) => Error::EvalError(format!("{}: {}", what, m)),
        other => other,
    }
}

/// Parses, validates and evaluates a scenario. `precision` overrides the
/// embedding precision of the working field.
pub fn parse_scenario(text: &str, precision: Option<u32>) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| json_error(e, text))?;
    if raw.v != 1 {
        return Err(Error::SchemaError(format!("unsupported schema version {}", raw.v)));
    }
    if raw.field.len() < 2 {
        return Err(Error::SchemaError("field needs at least two coefficients".into()));
    }
    let mut coeffs = Vec::new();
    for c in raw.field {
        coeffs.push(match c {
            Coefficient::Int(n) => BigInt::from(n),
            Coefficient::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::SchemaError(format!("field coefficient '{}' is not an integer", s)))?,
        });
    }
    let poly = Poly::from_bigints(&coeffs);
    if poly.degree().unwrap_or(0) < 1 || !poly.is_monic() {
        return Err(Error::SchemaError("field polynomial must be monic of positive degree".into()));
    }
    let field = match precision {
        Some(bits) => WorkingField::with_precision(poly, bits)?,
        None => WorkingField::new(poly)?,
    };

    let mut subfields = Vec::new();
    for (name, gens) in raw.subfields.map(|m| m.0).unwrap_or_default() {
        let mut vals = Vec::new();
        for g in &gens {
            vals.push(expr::evaluate(g, &field).map_err(|e| with_context(e, &format!("subfield {}", name)))?);
        }
        subfields.push((name, subfield(&field, &vals)));
    }
    let mut elements = Vec::new();
    for (name, src) in raw.elements.map(|m| m.0).unwrap_or_default() {
        let a = expr::evaluate(&src, &field).map_err(|e| with_context(e, &format!("element {}", name)))?;
        elements.push((name, src, a));
    }
    let mut checks = Vec::new();
    for c in raw.checks {
        let (name, params) = match c {
            RawCheck::Name(n) => (n, Map::new()),
            RawCheck::Detailed(d) => (d.suite, d.params),
        };
        let suite = Suite::from_name(&name).ok_or_else(|| Error::SchemaError(format!("unknown suite '{}'", name)))?;
        checks.push(CheckSpec { suite, params });
    }
    Ok(Scenario {
        name: raw.name.unwrap_or_else(|| "scenario".to_string()),
        field,
        subfields,
        elements,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario() {
        let s = parse_scenario(r#"{"v":1,"field":[-2,0,1],"elements":{"a":"1+t"}}"#, None).unwrap();
        let f = &s.field;
        assert_eq!(s.element("a").unwrap(), &f.one().add(&f.theta()));
        assert!(s.subfields.is_empty() && s.checks.is_empty());
    }

    #[test]
    fn eisenstein_torsion() {
        let s = parse_scenario(r#"{"v":1,"field":[1,1,"1"]}"#, None).unwrap();
        assert_eq!(s.field.torsion_order(), 6);
    }

    #[test]
    fn rejections() {
        let bad = |t: &str| parse_scenario(t, None).unwrap_err();
        assert_eq!(bad(r#"{"v":1,"field":[-4,0,1]}"#), Error::ReduciblePolynomial);
        assert!(matches!(bad(r#"{"field":[-2,0,1]}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":2,"field":[-2,0,1]}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"extra":0}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,2]}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"elements":{"a":"1","a":"2"}}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"subfields":{"K":[],"K":["t"]}}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"checks":["nope"]}"#), Error::SchemaError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"elements":{"a":"1+"}}"#), Error::ParseError { .. }));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1],"elements":{"a":"1/(t^2-2)"}}"#), Error::EvalError(_)));
        assert!(matches!(bad(r#"{"v":1,"field":[-2,0,1]"#), Error::ParseError { .. }));
    }

    #[test]
    fn detailed_checks() {
        let s = parse_scenario(
            r#"{"v":1,"field":[-2,0,1],"checks":["product-formula",{"suite":"membership","params":{"D":["F"]}}]}"#,
            None,
        )
        .unwrap();
        assert_eq!(s.checks[0].suite, Suite::ProductFormula);
        assert_eq!(s.checks[1].suite, Suite::Membership);
        assert_eq!(s.checks[1].params["D"], serde_json::json!(["F"]));
    }
}
