//! Place vectors: `v -> log ||a||_v` over the places of the working field
//! together with the normalized weights `[F_v : Q_v] / [F : Q]`.

pub mod local;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{factor_integer, Q};
use crate::error::{Error, Result};
use crate::heights::GElement;
use crate::json::{gelement_json, q_json, real_json, real_str};
use crate::numberfield::numeric::{ln_abs_at, q_to_f64};
use crate::numberfield::{AutId, FieldElement, WorkingField};

pub use local::{LocalFactor, LocalFactorization, LocalPrime, PrimeIdeal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceId {
    /// Real embeddings first, then one class per complex-conjugate pair.
    Archimedean { class: usize },
    Finite { p: u64, ideal: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaceEntry {
    pub value: f64,
    pub abs_error: f64,
    pub weight: Q,
    /// For finite places, `value = coefficient * ln p` exactly.
    pub coefficient: Option<Q>,
    /// `(e, f)` for finite places.
    pub local_degrees: Option<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct PlaceVector {
    pub element: GElement,
    pub entries: BTreeMap<PlaceId, PlaceEntry>,
}

/// A real number with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real {
    pub value: f64,
    pub abs_error: f64,
}

/// Place data for one working field, with a write-once cache of the
/// local data per rational prime.
pub struct PlaceSpace<'f> {
    field: &'f WorkingField,
    cache: Mutex<BTreeMap<u64, Arc<LocalPrime>>>,
}

/// Embedding index representing each archimedean class.
fn class_representatives(f: &WorkingField) -> Vec<usize> {
    (0..f.real_places() + f.complex_places()).collect()
}

fn class_of(f: &WorkingField, embedding: usize) -> usize {
    let r1 = f.real_places();
    let r2 = f.complex_places();
    if embedding < r1 + r2 {
        embedding
    } else {
        embedding - r2
    }
}

fn arch_weight(f: &WorkingField, class: usize) -> Q {
    let w = if class < f.real_places() { 1 } else { 2 };
    Q::new(BigInt::from(w), BigInt::from(f.degree()))
}

/// Archimedean places and weights.
pub fn places(f: &WorkingField) -> Vec<(PlaceId, Q)> {
    class_representatives(f)
        .into_iter()
        .map(|c| (PlaceId::Archimedean { class: c }, arch_weight(f, c)))
        .collect()
}

impl<'f> PlaceSpace<'f> {
    pub fn new(field: &'f WorkingField) -> Self {
        PlaceSpace { field, cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn field(&self) -> &'f WorkingField {
        self.field
    }

    pub fn local(&self, p: u64) -> Result<Arc<LocalPrime>> {
        if let Some(lp) = self.cache.lock().unwrap().get(&p) {
            return Ok(lp.clone());
        }
        let lp = Arc::new(LocalPrime::new(self.field, p)?);
        Ok(self.cache.lock().unwrap().entry(p).or_insert(lp).clone())
    }

    /// Finite places above p with weights `e f / d`.
    pub fn finite_places(&self, p: u64) -> Result<Vec<(PlaceId, u32, u32, Q)>> {
        let lp = self.local(p)?;
        let d = BigInt::from(self.field.degree());
        Ok(lp
            .ideals()
            .iter()
            .enumerate()
            .map(|(i, id)| {
                (PlaceId::Finite { p, ideal: i }, id.e, id.f, Q::new(BigInt::from(id.e * id.f), d.clone()))
            })
            .collect())
    }

    pub fn local_factorization(&self, a: &FieldElement, p: &BigInt) -> Result<LocalFactorization> {
        let p = local::small_prime(p)?;
        self.local(p)?.local_factorization(self.field, a)
    }

    /// Primes at which `a` may have nonzero valuation: those dividing the
    /// common denominator D of its coordinates or the norm of D*a.
    pub fn touched_primes(&self, a: &FieldElement) -> Result<Vec<u64>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let den = a.denominator();
        let norm = self.field.norm(a);
        let mut ps: Vec<BigInt> = factor_integer(&den).into_iter().map(|(p, _)| p).collect();
        if !norm.numer().is_zero() {
            ps.extend(factor_integer(norm.numer()).into_iter().map(|(p, _)| p));
        }
        ps.sort();
        ps.dedup();
        ps.iter().map(local::small_prime).collect()
    }

    pub fn f_vector(&self, u: &GElement) -> Result<PlaceVector> {
        let f = self.field;
        let mut entries = BTreeMap::new();
        if u.is_zero() {
            return Ok(PlaceVector { element: u.clone(), entries });
        }
        let scale = u.scale();
        let sf = q_to_f64(scale);
        let base = u.base();
        for c in class_representatives(f) {
            let (ln, err) = ln_abs_at(&f.embeddings()[c], base.coords(), f.precision())?;
            entries.insert(
                PlaceId::Archimedean { class: c },
                PlaceEntry {
                    value: sf * ln,
                    abs_error: sf * err + 1e-16 * (sf * ln).abs(),
                    weight: arch_weight(f, c),
                    coefficient: None,
                    local_degrees: None,
                },
            );
        }
        let d = BigInt::from(f.degree());
        for p in self.touched_primes(base)? {
            let lp = self.local(p)?;
            let vals = lp.valuations(f, base)?;
            let lnp = (p as f64).ln();
            for (i, (ideal, v)) in lp.ideals().iter().zip(vals).enumerate() {
                if v == 0 {
                    continue;
                }
                let coef = -(scale * Q::new(BigInt::from(v), BigInt::from(ideal.e)));
                let value = q_to_f64(&coef) * lnp;
                entries.insert(
                    PlaceId::Finite { p, ideal: i },
                    PlaceEntry {
                        value,
                        abs_error: 4e-16 * value.abs(),
                        weight: Q::new(BigInt::from(ideal.e * ideal.f), d.clone()),
                        coefficient: Some(coef),
                        local_degrees: Some((ideal.e, ideal.f)),
                    },
                );
            }
        }
        Ok(PlaceVector { element: u.clone(), entries })
    }

    /// The place vector of `s(u)`, obtained by permuting entries within
    /// each fiber.
    pub fn permute_by_automorphism(&self, v: &PlaceVector, s: AutId) -> Result<PlaceVector> {
        let f = self.field;
        let action = f.embedding_action(s);
        let mut entries = BTreeMap::new();
        for (id, entry) in &v.entries {
            match *id {
                PlaceId::Archimedean { .. } => {}
                PlaceId::Finite { p, ideal } => {
                    let perm = self.local(p)?.ideal_permutation(f, s)?;
                    entries.insert(PlaceId::Finite { p, ideal: perm[ideal] }, entry.clone());
                }
            }
        }
        for c in class_representatives(f) {
            // phi_c(s(x)) = phi_{action[c]}(x)
            let src = PlaceId::Archimedean { class: class_of(f, action[c]) };
            if let Some(e) = v.entries.get(&src) {
                entries.insert(PlaceId::Archimedean { class: c }, e.clone());
            }
        }
        Ok(PlaceVector { element: v.element.apply_automorphism(f, s), entries })
    }
}

impl PlaceVector {
    fn weighted_sum(&self, abs: bool) -> Real {
        let mut value = 0.0;
        let mut err = 0.0;
        for e in self.entries.values() {
            let w = q_to_f64(&e.weight);
            let x = if abs { e.value.abs() } else { e.value };
            value += w * x;
            err += w * e.abs_error + 2e-16 * (w * x).abs();
        }
        Real { value, abs_error: err + 1e-16 * value.abs() }
    }

    /// `Σ weight · |value|`, equal to twice the height.
    pub fn l1_norm(&self) -> Real {
        self.weighted_sum(true)
    }

    /// `Σ weight · value`, zero by the product formula.
    pub fn integral(&self) -> Real {
        self.weighted_sum(false)
    }

    /// Sum of weights per fiber: archimedean under key 0, finite under p.
    pub fn fiber_weights(&self) -> BTreeMap<u64, Q> {
        let mut out: BTreeMap<u64, Q> = BTreeMap::new();
        for (id, e) in &self.entries {
            let key = match id {
                PlaceId::Archimedean { .. } => 0,
                PlaceId::Finite { p, .. } => *p,
            };
            *out.entry(key).or_insert_with(Q::zero) += &e.weight;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut arch = Vec::new();
        let mut finite = Vec::new();
        for (id, e) in &self.entries {
            match id {
                PlaceId::Archimedean { class } => arch.push(json!({
                    "id": class,
                    "value": real_str(e.value),
                    "abs_error": real_str(e.abs_error),
                    "weight": q_json(&e.weight),
                })),
                PlaceId::Finite { p, ideal } => {
                    let (ee, ff) = e.local_degrees.unwrap_or((1, 1));
                    finite.push(json!({
                        "p": p,
                        "ideal": ideal,
                        "e": ee,
                        "f": ff,
                        "value": real_str(e.value),
                        "abs_error": real_str(e.abs_error),
                        "weight": q_json(&e.weight),
                    }))
                }
            }
        }
        let l1 = self.l1_norm();
        let int = self.integral();
        json!({
            "element": gelement_json(&self.element),
            "arch": arch,
            "finite": finite,
            "l1_norm": real_json(l1.value, l1.abs_error),
            "integral": real_json(int.value, int.abs_error),
        })
    }
}

/// Whether the weights of every fiber present sum to one.
pub fn weights_partition(ps: &PlaceSpace, primes: &[u64]) -> Result<bool> {
    let f = ps.field();
    let arch: Q = places(f).iter().map(|(_, w)| w.clone()).sum();
    if !arch.is_one() {
        return Ok(false);
    }
    for &p in primes {
        let s: Q = ps.finite_places(p)?.iter().map(|x| x.3.clone()).sum();
        if !s.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::heights::{g_height, GElement};
    use crate::numberfield::Poly;

    #[test]
    fn sqrt2_vectors() {
        let f = WorkingField::new(Poly::from_ints(&[-2, 0, 1])).unwrap();
        let ps = PlaceSpace::new(&f);
        assert_eq!(places(&f).len(), 2);
        let u = GElement::of(&f, f.theta()).unwrap();
        let v = ps.f_vector(&u).unwrap();
        assert_eq!(v.entries.len(), 3);
        let l2 = 2f64.ln();
        assert!((v.l1_norm().value - l2).abs() < 1e-12);
        assert!(v.integral().value.abs() < 1e-12);
        let fin = &v.entries[&PlaceId::Finite { p: 2, ideal: 0 }];
        assert!((fin.value + 0.5 * l2).abs() < 1e-12);
        assert_eq!(fin.weight, Q::one());

        let half = GElement::new(&f, qf(1, 2), f.from_int(2)).unwrap();
        assert!((ps.f_vector(&half).unwrap().l1_norm().value - l2).abs() < 1e-12);

        let a = GElement::of(&f, f.one().add(&f.theta())).unwrap();
        let va = ps.f_vector(&a).unwrap();
        assert!(va.integral().value.abs() < 1e-12);
        assert!((va.l1_norm().value - 2.0 * g_height(&f, &a).unwrap().value).abs() < 1e-12);
        let swapped = ps.permute_by_automorphism(&va, 1).unwrap();
        let direct = ps.f_vector(&a.apply_automorphism(&f, 1)).unwrap();
        for (id, e) in &direct.entries {
            assert!((swapped.entries[id].value - e.value).abs() < 1e-12);
        }
        assert!(weights_partition(&ps, &[2, 3, 7]).unwrap());
    }

    #[test]
    fn rational_field() {
        let f = WorkingField::new(Poly::from_ints(&[0, 1])).unwrap();
        let ps = PlaceSpace::new(&f);
        let u = GElement::of(&f, f.from_int(12)).unwrap();
        let v = ps.f_vector(&u).unwrap();
        assert_eq!(v.entries.len(), 3);
        assert!(v.integral().value.abs() < 1e-12);
        assert!((v.l1_norm().value - 2.0 * 12f64.ln()).abs() < 1e-12);
    }
}
