//! Galois orbits modulo torsion over a subfield K, the orbit size delta_K,
//! the width W_K and two-sided bounds on the distance V_K to K^div.

use crate::error::{Error, Result};
use crate::heights::{is_torsion, weil_height, HeightValue};
use crate::numberfield::{FieldElement, Subfield, WorkingField};

#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// One image per class modulo torsion, sorted.
    pub representatives: Vec<FieldElement>,
    pub delta: usize,
    /// Number of distinct exact images, i.e. `[K(a):K]`.
    pub conjugate_count: usize,
    pub width: HeightValue,
    /// Product of `s(a)` over the full fixing group.
    pub norm_element: FieldElement,
}

#[derive(Clone, Copy, Debug)]
pub struct VkBounds {
    pub lower: HeightValue,
    pub upper: HeightValue,
}

fn check_nonzero(a: &FieldElement) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroElement)
    } else {
        Ok(())
    }
}

fn images(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Vec<FieldElement> {
    k.fixing_group().iter().map(|&s| f.apply_automorphism(s, a)).collect()
}

fn distinct(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    v.sort();
    v.dedup();
    v
}

/// `x / y` is a root of unity.
fn torsion_equivalent(f: &WorkingField, x: &FieldElement, y: &FieldElement) -> bool {
    let r = f.div(x, y).expect("nonzero");
    is_torsion(f, &r).expect("nonzero")
}

/// Distinct exact images and one representative per torsion class.
fn classes(f: &WorkingField, a: &FieldElement, k: &Subfield) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let conj = distinct(images(f, a, k));
    let mut reps: Vec<FieldElement> = Vec::new();
    for x in &conj {
        if !reps.iter().any(|r| torsion_equivalent(f, x, r)) {
            reps.push(x.clone());
        }
    }
    reps.sort();
    (conj, reps)
}

pub fn orbit_mod_torsion(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Result<OrbitReport> {
    check_nonzero(a)?;
    let norm_element = f.product(&images(f, a, k));
    let (conj, reps) = classes(f, a, k);
    let width = if reps.len() == 1 {
        HeightValue::ZERO
    } else {
        let mut best = HeightValue::ZERO;
        for x in &conj {
            let h = weil_height(f, &f.div(x, a)?)?;
            if h.value > best.value {
                best = h;
            }
        }
        best
    };
    Ok(OrbitReport {
        delta: reps.len(),
        representatives: reps,
        conjugate_count: conj.len(),
        width,
        norm_element,
    })
}

pub fn delta_k(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Result<usize> {
    check_nonzero(a)?;
    Ok(classes(f, a, k).1.len())
}

/// `[K(a^m):K]`, counting distinct exact images of `a^m`.
pub fn degree_of_power(f: &WorkingField, a: &FieldElement, m: i64, k: &Subfield) -> Result<usize> {
    check_nonzero(a)?;
    if m == 0 {
        return Err(Error::InvalidInput("exponent must be nonzero".into()));
    }
    let p = f.pow(a, m);
    Ok(distinct(images(f, &p, k)).len())
}

pub fn width_k(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Result<HeightValue> {
    Ok(orbit_mod_torsion(f, a, k)?.width)
}

/// `lower = W/2`, `upper = min(W, h(a^n / eta) / n)` with n the number of
/// distinct conjugates and eta their product.
pub fn vk_bounds(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Result<VkBounds> {
    let rep = orbit_mod_torsion(f, a, k)?;
    let w = rep.width;
    let lower = HeightValue { value: w.value / 2.0, abs_error: w.abs_error / 2.0 };
    if w.is_exact_zero() {
        return Ok(VkBounds { lower, upper: HeightValue::ZERO });
    }
    let n = rep.conjugate_count;
    let eta = f.product(&distinct(images(f, a, k)));
    let q = f.div(&f.pow(a, n as i64), &eta)?;
    let alt = weil_height(f, &q)?.scaled(1.0 / n as f64);
    let upper = if alt.value < w.value { alt } else { w };
    Ok(VkBounds { lower, upper })
}

/// Witness `(n, a^n)` with `a^n` in K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KdivWitness {
    pub exponent: u64,
    pub power: FieldElement,
}

/// Membership in K^div; on success returns the verified witness with
/// exponent equal to the torsion order of F.
pub fn in_kdiv(f: &WorkingField, a: &FieldElement, k: &Subfield) -> Result<Option<KdivWitness>> {
    let rep = orbit_mod_torsion(f, a, k)?;
    if rep.delta != 1 {
        return Ok(None);
    }
    let n = f.torsion_order();
    let power = f.pow(a, n as i64);
    if !k.contains(f, &power) {
        return Err(Error::WitnessFailure(format!("a^{} is not fixed by the fixing group", n)));
    }
    Ok(Some(KdivWitness { exponent: n, power }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{subfield, Poly};

    #[test]
    fn sqrt2_orbits() {
        let f = WorkingField::new(Poly::from_ints(&[-2, 0, 1])).unwrap();
        let q = subfield(&f, &[]);
        let t = f.theta();
        let r = orbit_mod_torsion(&f, &t, &q).unwrap();
        assert_eq!((r.delta, r.conjugate_count), (1, 2));
        assert!(r.width.is_exact_zero());
        assert_eq!(r.norm_element, f.from_int(-2));

        let a = f.one().add(&t);
        let r = orbit_mod_torsion(&f, &a, &q).unwrap();
        assert_eq!(r.delta, 2);
        let l = (1.0 + 2f64.sqrt()).ln();
        assert!((r.width.value - l).abs() < 1e-12);
        assert_eq!(degree_of_power(&f, &a, 5, &q).unwrap(), 2);
        assert_eq!(degree_of_power(&f, &t, 2, &q).unwrap(), 1);

        let b = vk_bounds(&f, &a, &q).unwrap();
        assert!((b.lower.value - l / 2.0).abs() < 1e-12);
        assert!((b.upper.value - l / 2.0).abs() < 1e-12);

        let w = in_kdiv(&f, &t, &q).unwrap().unwrap();
        assert_eq!(w, KdivWitness { exponent: 2, power: f.from_int(2) });
        assert!(in_kdiv(&f, &a, &q).unwrap().is_none());
        assert_eq!(delta_k(&f, &f.zero(), &q), Err(Error::ZeroElement));
    }
}
