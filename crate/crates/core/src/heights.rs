//! Absolute logarithmic Weil height, torsion detection, and the Q-vector
//! space of algebraic numbers modulo torsion as scale/base pairs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{ln_bigint, Q};
use crate::error::{Error, Result};
use crate::numberfield::numeric::{isolate_roots, q_to_f64, IsolatedRoot};
use crate::numberfield::{FieldElement, WorkingField};

/// A nonnegative real with a rigorous absolute error bound. An exact zero
/// has both fields equal to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightValue {
    pub value: f64,
    pub abs_error: f64,
}

impl HeightValue {
    pub const ZERO: HeightValue = HeightValue { value: 0.0, abs_error: 0.0 };

    pub fn is_exact_zero(&self) -> bool {
        self.value == 0.0 && self.abs_error == 0.0
    }

    pub fn scaled(&self, c: f64) -> HeightValue {
        HeightValue { value: self.value * c.abs(), abs_error: self.abs_error * c.abs() * (1.0 + 1e-15) }
    }
}

/// `q * f_beta`, i.e. beta^q in the group modulo torsion. Canonical form
/// has `scale = 1/s` with s > 0; the zero element is `(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GElement {
    scale: Q,
    base: FieldElement,
}

impl GElement {
    /// Canonicalizes `r/s * f_base` to `(1/s, base^r)`.
    pub fn new(f: &WorkingField, scale: Q, base: FieldElement) -> Result<GElement> {
        if base.is_zero() {
            return Err(Error::ZeroElement);
        }
        if scale.is_zero() {
            return Ok(GElement::zero(f));
        }
        let r = scale.numer().clone();
        let s = scale.denom().clone();
        let base = if r.is_one() { base } else { f.pow_big(&base, &r) };
        if is_torsion(f, &base)? {
            return Ok(GElement::zero(f));
        }
        Ok(GElement { scale: Q::new(BigInt::one(), s), base })
    }

    /// `f_base` itself.
    pub fn of(f: &WorkingField, base: FieldElement) -> Result<GElement> {
        GElement::new(f, Q::one(), base)
    }

    pub fn zero(f: &WorkingField) -> GElement {
        GElement { scale: Q::one(), base: f.one() }
    }

    pub fn scale(&self) -> &Q {
        &self.scale
    }

    pub fn base(&self) -> &FieldElement {
        &self.base
    }

    /// The positive integer s of the canonical scale 1/s.
    pub fn denominator(&self) -> &BigInt {
        self.scale.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_one()
    }

    pub fn negate(&self, f: &WorkingField) -> GElement {
        if self.is_zero() {
            return self.clone();
        }
        GElement { scale: self.scale.clone(), base: f.inv(&self.base).expect("nonzero base") }
    }

    pub fn scale_by(&self, f: &WorkingField, c: &Q) -> GElement {
        GElement::new(f, &self.scale * c, self.base.clone()).expect("nonzero base")
    }

    /// `sigma` acting on the base.
    pub fn apply_automorphism(&self, f: &WorkingField, s: usize) -> GElement {
        GElement { scale: self.scale.clone(), base: f.apply_automorphism(s, &self.base) }
    }
}

/// True iff `a` is a root of unity, decided exactly by `a^w = 1`.
pub fn is_torsion(f: &WorkingField, a: &FieldElement) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if a.is_rational() {
        let c = &a.coords()[0];
        return Ok(c.abs().is_one());
    }
    Ok(f.pow(a, f.torsion_order() as i64).is_one())
}

/// Weil height via the Mahler measure of the minimal polynomial.
pub fn weil_height(f: &WorkingField, a: &FieldElement) -> Result<HeightValue> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if is_torsion(f, a)? {
        return Ok(HeightValue::ZERO);
    }
    if a.is_rational() {
        let c = &a.coords()[0];
        let big = std::cmp::max(c.numer().abs(), c.denom().clone());
        let v = ln_bigint(&big);
        return Ok(HeightValue { value: v, abs_error: 1e-15 * (1.0 + v) });
    }
    let mp = f.minimal_polynomial(a);
    let n = mp.deg();
    let (_, prim) = mp.primitive_integer();
    let lead = ln_bigint(prim.last().unwrap());
    let (sum, err) = match isolate_roots(&mp, f.precision()) {
        Ok(roots) => log_plus_sum(&roots)?,
        Err(_) => embedding_log_plus_sum(f, a, n)?,
    };
    let value = (lead + sum) / n as f64;
    let abs_error = (err + 1e-15 * (lead.abs() + sum.abs() + 1.0)) / n as f64;
    Ok(HeightValue { value, abs_error })
}

/// Σ log⁺|z| over isolated roots, with an error bound.
fn log_plus_sum(roots: &[IsolatedRoot]) -> Result<(f64, f64)> {
    let mut sum = 0.0;
    let mut err = 0.0;
    for r in roots {
        let (lp, e) = log_plus_disk(r.center.abs_f64(), r.radius_f64());
        sum += lp;
        err += e;
    }
    Ok((sum, err + 1e-15 * roots.len() as f64 * (1.0 + sum.abs())))
}

/// log⁺ of a modulus known to lie in `[c - r, c + r]`.
fn log_plus_disk(c: f64, r: f64) -> (f64, f64) {
    if c + r <= 1.0 {
        return (0.0, 0.0);
    }
    if c - r >= 1.0 {
        return (c.ln(), r / (c - r) + 1e-15 * (1.0 + c.ln().abs()));
    }
    ((c.max(1.0)).ln(), (c + r).ln() + 1e-15)
}

/// Fallback: every embedding image of `a` is a root of its minimal
/// polynomial, each repeated d / n times.
fn embedding_log_plus_sum(f: &WorkingField, a: &FieldElement, n: usize) -> Result<(f64, f64)> {
    let d = f.degree();
    let mut sum = 0.0;
    let mut err = 0.0;
    for root in f.embeddings() {
        let (v, e) = root.eval(a.coords());
        let (lp, le) = log_plus_disk(v.abs_f64(), e);
        sum += lp;
        err += le;
    }
    if !err.is_finite() {
        return Err(Error::PrecisionExhausted { bits: f.precision() });
    }
    let k = (d / n) as f64;
    Ok((sum / k, err / k))
}

/// Exact equality in the group modulo torsion:
/// `b1^{s2} * b2^{-s1}` is a root of unity.
pub fn g_equal(f: &WorkingField, u: &GElement, v: &GElement) -> bool {
    if u == v {
        return true;
    }
    let a = f.pow_big(&u.base, v.denominator());
    let b = f.pow_big(&v.base, u.denominator());
    let ratio = f.div(&a, &b).expect("nonzero base");
    is_torsion(f, &ratio).expect("nonzero ratio")
}

pub fn g_height(f: &WorkingField, u: &GElement) -> Result<HeightValue> {
    if u.is_zero() {
        return Ok(HeightValue::ZERO);
    }
    let h = weil_height(f, &u.base)?;
    Ok(h.scaled(q_to_f64(&u.scale)))
}

/// The formal sum of the terms as one canonical element.
pub fn g_combine(f: &WorkingField, terms: &[GElement]) -> GElement {
    // merge equal bases first so that, e.g., 1/2 f_2 + 1/2 f_2 = f_2
    let mut merged: BTreeMap<&FieldElement, Q> = BTreeMap::new();
    for t in terms.iter().filter(|t| !t.is_zero()) {
        *merged.entry(&t.base).or_insert_with(Q::zero) += &t.scale;
    }
    merged.retain(|_, q| !q.is_zero());
    if merged.is_empty() {
        return GElement::zero(f);
    }
    let s = merged.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let exps: Vec<BigInt> = merged.values().map(|q| (q * Q::from_integer(s.clone())).to_integer()).collect();
    let g = exps.iter().fold(s.clone(), |acc, e| acc.gcd(e));
    let s = &s / &g;
    let mut base = f.one();
    for (b, e) in merged.keys().zip(&exps) {
        base = f.mul(&base, &f.pow_big(b, &(e / &g)));
    }
    GElement::new(f, Q::new(BigInt::one(), s), base).expect("product of nonzero bases")
}

/// `u - v`
pub fn g_sub(f: &WorkingField, u: &GElement, v: &GElement) -> GElement {
    g_combine(f, &[u.clone(), v.negate(f)])
}
