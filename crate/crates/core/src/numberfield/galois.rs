//! Subfields of the working field via their fixing subgroups.

use std::collections::BTreeSet;

use super::field::{AutId, FieldElement, WorkingField};

/// A subfield K of F, stored as Gal(F/K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subfield {
    generators: Vec<FieldElement>,
    fixing_group: Vec<AutId>,
    degree_over_q: usize,
}

impl Subfield {
    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    /// Sorted automorphism indices fixing K pointwise; always contains 0.
    pub fn fixing_group(&self) -> &[AutId] {
        &self.fixing_group
    }

    pub fn degree_over_q(&self) -> usize {
        self.degree_over_q
    }

    /// `[F:K]`
    pub fn index(&self) -> usize {
        self.fixing_group.len()
    }

    pub fn contains(&self, f: &WorkingField, a: &FieldElement) -> bool {
        self.fixing_group.iter().all(|&s| f.apply_automorphism(s, a) == *a)
    }
}

/// The subfield generated over Q by `gens`.
pub fn subfield(f: &WorkingField, gens: &[FieldElement]) -> Subfield {
    let fixing_group: Vec<AutId> = (0..f.group_order())
        .filter(|&s| gens.iter().all(|g| f.apply_automorphism(s, g) == *g))
        .collect();
    Subfield {
        generators: gens.to_vec(),
        degree_over_q: f.degree() / fixing_group.len(),
        fixing_group,
    }
}

/// Subgroup generated by a set of automorphisms.
pub fn generated_subgroup(f: &WorkingField, gens: &[AutId]) -> Vec<AutId> {
    let mut group: BTreeSet<AutId> = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = f.compose(x, g);
            if group.insert(y) {
                frontier.push(y);
            }
        }
    }
    group.into_iter().collect()
}

/// Whether `h` is normal in `g` (assumes h is a subgroup of g).
pub fn is_normal_in(f: &WorkingField, h: &[AutId], g: &[AutId]) -> bool {
    let hs: BTreeSet<AutId> = h.iter().copied().collect();
    g.iter().all(|&x| {
        let xi = f.inverse(x);
        h.iter().all(|&y| hs.contains(&f.compose(f.compose(x, y), xi)))
    })
}

/// `s H s^-1` as a sorted list.
pub fn conjugate_subgroup(f: &WorkingField, h: &[AutId], s: AutId) -> Vec<AutId> {
    let si = f.inverse(s);
    let set: BTreeSet<AutId> = h.iter().map(|&y| f.compose(f.compose(s, y), si)).collect();
    set.into_iter().collect()
}

/// True iff K1 or K2 is Galois over K1 ∩ K2, i.e. one of the fixing
/// groups is normal in the group they generate together.
pub fn galois_condition(f: &WorkingField, k1: &Subfield, k2: &Subfield) -> bool {
    let joint: Vec<AutId> = k1.fixing_group.iter().chain(&k2.fixing_group).copied().collect();
    let g = generated_subgroup(f, &joint);
    is_normal_in(f, &k1.fixing_group, &g) || is_normal_in(f, &k2.fixing_group, &g)
}

/// The intersection K1 ∩ K2 as the fixed field of the joint group.
pub fn intersection(f: &WorkingField, k1: &Subfield, k2: &Subfield) -> Vec<AutId> {
    let joint: Vec<AutId> = k1.fixing_group.iter().chain(&k2.fixing_group).copied().collect();
    generated_subgroup(f, &joint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use crate::numberfield::poly::Poly;

    fn biquad() -> (WorkingField, FieldElement, FieldElement) {
        let f = WorkingField::new(Poly::from_ints(&[1, 0, -10, 0, 1])).unwrap();
        let s2 = f.from_poly(&Poly::new(vec![q(0), qf(-9, 2), q(0), qf(1, 2)]));
        let s3 = f.from_poly(&Poly::new(vec![q(0), qf(11, 2), q(0), qf(-1, 2)]));
        (f, s2, s3)
    }

    #[test]
    fn subfield_degrees() {
        let (f, s2, s3) = biquad();
        assert_eq!(f.mul(&s2, &s2), f.from_int(2));
        let k0 = subfield(&f, &[]);
        assert_eq!(k0.degree_over_q(), 1);
        assert_eq!(k0.index(), 4);
        let k1 = subfield(&f, std::slice::from_ref(&s2));
        assert_eq!(k1.index(), 2);
        assert_eq!(k1.degree_over_q(), 2);
        let kf = subfield(&f, &[f.theta()]);
        assert_eq!(kf.fixing_group(), &[0]);
        let k2 = subfield(&f, &[s3]);
        assert!(galois_condition(&f, &k1, &k2));
        assert!(galois_condition(&f, &k1, &k1));
        assert_eq!(intersection(&f, &k1, &k2).len(), 4);
    }

    #[test]
    fn s3_condition_fails() {
        // root of x^6 + 9x^4 - 4x^3 + 27x^2 + 36x + 31: cbrt(2) + sqrt(-3)
        let f = WorkingField::new(Poly::from_ints(&[31, 36, 27, -4, 9, 0, 1])).unwrap();
        let cubics = f.roots_in_field(&Poly::from_ints(&[-2, 0, 0, 1]));
        assert_eq!(cubics.len(), 3);
        let ka = subfield(&f, &[cubics[0].clone()]);
        let kb = subfield(&f, &[cubics[1].clone()]);
        assert_eq!(ka.degree_over_q(), 3);
        assert!(!galois_condition(&f, &ka, &kb));
        let all = generated_subgroup(&f, &[1, 2, 3, 4, 5]);
        assert_eq!(all.len(), 6);
        assert!(!is_normal_in(&f, ka.fixing_group(), &all));
    }
}
