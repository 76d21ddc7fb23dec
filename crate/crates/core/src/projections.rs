//! Field projections on the group modulo torsion: S_K (scaled relative
//! norm), T_K = I - S_K, composites I - (I - P_1)...(I - P_N), and the
//! membership and decomposition decisions built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::heights::{g_combine, g_equal, g_sub, is_torsion, GElement};
use crate::json::{element_json, gelement_json};
use crate::numberfield::galois::{conjugate_subgroup, galois_condition};
use crate::numberfield::{AutId, FieldElement, Subfield, WorkingField};
use crate::placespace::{PlaceSpace, Real};

#[derive(Clone, Debug)]
pub struct ProjectionSpec {
    /// projected with S
    pub fields_d: Vec<Subfield>,
    /// projected with T
    pub fields_e: Vec<Subfield>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    S,
    T,
}

impl ProjectionSpec {
    pub fn new(fields_d: Vec<Subfield>, fields_e: Vec<Subfield>) -> Self {
        ProjectionSpec { fields_d, fields_e }
    }

    fn operators(&self) -> Vec<(Kind, &Subfield)> {
        self.fields_d
            .iter()
            .map(|k| (Kind::S, k))
            .chain(self.fields_e.iter().map(|k| (Kind::T, k)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.fields_d.len() + self.fields_e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when some pair of fields fails the Galois condition; results
    /// then carry no commutation guarantee.
    pub fn condition_violating(&self, f: &WorkingField) -> bool {
        let all: Vec<&Subfield> = self.fields_d.iter().chain(&self.fields_e).collect();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if !galois_condition(f, all[i], all[j]) {
                    return true;
                }
            }
        }
        false
    }
}

/// `(scale / |H|, prod_{s in H} s(base))`
pub fn s_project(f: &WorkingField, u: &GElement, k: &Subfield) -> GElement {
    if u.is_zero() {
        return u.clone();
    }
    let imgs: Vec<FieldElement> = k.fixing_group().iter().map(|&s| f.apply_automorphism(s, u.base())).collect();
    let scale = u.scale() / Q::from_integer(BigInt::from(k.index()));
    GElement::new(f, scale, f.product(&imgs)).expect("norm of a nonzero element")
}

pub fn t_project(f: &WorkingField, u: &GElement, k: &Subfield) -> GElement {
    g_sub(f, u, &s_project(f, u, k))
}

fn apply(f: &WorkingField, kind: Kind, u: &GElement, k: &Subfield) -> GElement {
    match kind {
        Kind::S => s_project(f, u, k),
        Kind::T => t_project(f, u, k),
    }
}

/// `I - (I - P_1)(I - P_2)...(I - P_N)`, rightmost factor applied first.
pub fn composite_project(f: &WorkingField, u: &GElement, spec: &ProjectionSpec) -> GElement {
    let mut v = u.clone();
    for (kind, k) in spec.operators().into_iter().rev() {
        let pv = apply(f, kind, &v, k);
        v = g_sub(f, &v, &pv);
    }
    g_sub(f, u, &v)
}

/// `S_1 + S_2 - S_1 S_2` for a two-field spec, evaluated term by term.
pub fn two_field_expansion(f: &WorkingField, u: &GElement, spec: &ProjectionSpec) -> GElement {
    let ops = spec.operators();
    assert_eq!(ops.len(), 2, "two-field expansion needs exactly two fields");
    let (k1, f1) = ops[0];
    let (k2, f2) = ops[1];
    let a = apply(f, k1, u, f1);
    let b = apply(f, k2, u, f2);
    let c = apply(f, k1, &b, f1);
    g_combine(f, &[a, b, c.negate(f)])
}

/// `q` and per-field factors `c_j in K_j` with `base^(q/s) = prod c_j`.
#[derive(Clone, Debug)]
pub struct MembershipWitness {
    pub q: BigInt,
    /// one entry per D-field, in the order given
    pub factors: Vec<FieldElement>,
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub d_part: GElement,
    pub e_part: GElement,
    pub is_member: bool,
    pub condition_violating: bool,
    pub witness: Option<MembershipWitness>,
}

impl DecompositionResult {
    pub fn to_json(&self, field_names: &[String]) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "q": w.q.to_string(),
                "factors": w.factors.iter().zip(field_names).map(|(c, n)| json!({
                    "field": n,
                    "element": element_json(c),
                    "expr": c.to_string(),
                })).collect::<Vec<_>>(),
            })
        });
        json!({
            "d_part": gelement_json(&self.d_part),
            "e_part": gelement_json(&self.e_part),
            "is_member": self.is_member,
            "condition_violating": self.condition_violating,
            "witness_q": self.witness.as_ref().map(|w| w.q.to_string()),
            "witness": witness,
        })
    }
}

pub fn is_member(f: &WorkingField, u: &GElement, spec: &ProjectionSpec) -> Result<DecompositionResult> {
    let d_part = composite_project(f, u, spec);
    let e_part = g_sub(f, u, &d_part);
    let member = g_equal(f, &d_part, u);
    let witness = if member && spec.fields_e.is_empty() && !spec.fields_d.is_empty() {
        Some(membership_witness(f, u, spec)?)
    } else {
        None
    };
    Ok(DecompositionResult {
        d_part,
        e_part,
        is_member: member,
        condition_violating: spec.condition_violating(f),
        witness,
    })
}

/// Expands the composite as a signed sum over index subsets; each term's
/// base is a relative norm into the field of its leftmost index.
fn membership_witness(f: &WorkingField, u: &GElement, spec: &ProjectionSpec) -> Result<MembershipWitness> {
    let n = spec.fields_d.len();
    let mut terms: Vec<(usize, bool, GElement)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut v = u.clone();
        for &i in idx.iter().rev() {
            v = s_project(f, &v, &spec.fields_d[i]);
        }
        let positive = idx.len() % 2 == 1;
        terms.push((idx[0], positive, v));
    }
    let den = terms
        .iter()
        .fold(u.denominator().clone(), |acc, (_, _, t)| acc.lcm(t.denominator()));
    let q = den * BigInt::from(f.torsion_order());
    let mut factors = vec![f.one(); n];
    for (i, positive, t) in &terms {
        if t.is_zero() {
            continue;
        }
        // (1/s_t) f_gamma contributes gamma^(q / s_t)
        let e = &q / t.denominator();
        let e = if *positive { e } else { -e };
        factors[*i] = f.mul(&factors[*i], &f.pow_big(t.base(), &e));
    }
    let lhs = f.pow_big(u.base(), &(&q / u.denominator()));
    let rhs = f.product(&factors);
    if lhs != rhs {
        return Err(Error::WitnessFailure("product of field factors differs from the power".into()));
    }
    for (c, k) in factors.iter().zip(&spec.fields_d) {
        if !k.contains(f, c) {
            return Err(Error::WitnessFailure("factor does not lie in its field".into()));
        }
    }
    Ok(MembershipWitness { q, factors })
}

/// Re-checks a witness by direct exponentiation.
pub fn verify_witness(f: &WorkingField, u: &GElement, spec: &ProjectionSpec, w: &MembershipWitness) -> bool {
    let (quo, rem) = w.q.div_rem(u.denominator());
    rem == BigInt::from(0)
        && f.pow_big(u.base(), &quo) == f.product(&w.factors)
        && w.factors.iter().zip(&spec.fields_d).all(|(c, k)| k.contains(f, c))
}

pub fn check_commutes(f: &WorkingField, k1: &Subfield, k2: &Subfield, testset: &[GElement]) -> bool {
    testset.iter().all(|u| {
        let a = s_project(f, &s_project(f, u, k1), k2);
        let b = s_project(f, &s_project(f, u, k2), k1);
        g_equal(f, &a, &b)
    })
}

/// `s(S_K(u)) = S_L(s(u))` on the testset, given `s K = L`.
pub fn check_conjugation(
    f: &WorkingField,
    k: &Subfield,
    l: &Subfield,
    s: AutId,
    testset: &[GElement],
) -> Result<bool> {
    if conjugate_subgroup(f, k.fixing_group(), s) != l.fixing_group() {
        return Err(Error::NotConjugate);
    }
    Ok(testset.iter().all(|u| {
        let a = s_project(f, u, k).apply_automorphism(f, s);
        let b = s_project(f, &u.apply_automorphism(f, s), l);
        g_equal(f, &a, &b)
    }))
}

/// `(||f_{S_K u}||_1, ||f_u||_1)`
pub fn operator_norm_check(ps: &PlaceSpace, u: &GElement, k: &Subfield) -> Result<(Real, Real)> {
    let f = ps.field();
    let image = s_project(f, u, k);
    Ok((ps.f_vector(&image)?.l1_norm(), ps.f_vector(u)?.l1_norm()))
}

/// Whether S_K fixes u, decided from the orbit side: every s(base)/base
/// over the fixing group is torsion.
pub fn fixed_by_orbit(f: &WorkingField, u: &GElement, k: &Subfield) -> bool {
    k.fixing_group().iter().all(|&s| {
        let r = f.div(&f.apply_automorphism(s, u.base()), u.base()).expect("nonzero base");
        is_torsion(f, &r).expect("nonzero")
    })
}
