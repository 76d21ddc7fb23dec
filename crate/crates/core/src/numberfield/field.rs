//! The working field F = Q[x]/(m_F) and exact arithmetic on its elements.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::factor_over_q;
use super::modular::Fp;
use super::numeric::{configured_precision, isolate_roots, match_root, IsolatedRoot};
use super::poly::Poly;
use crate::arith::{fmt_q, primes_from, totient, Q};
use crate::error::{Error, Result};

/// An element of F in the power basis 1, t, ..., t^(d-1).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FieldElement {
    coords: Vec<Q>,
}

impl FieldElement {
    pub fn from_coords(coords: Vec<Q>) -> Self {
        FieldElement { coords }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coords[0].is_one()
    }

    /// The coordinate polynomial `sum c_i x^i`.
    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coords.clone())
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement::from_coords(self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement::from_coords(self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement::from_coords(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Q) -> FieldElement {
        FieldElement::from_coords(self.coords.iter().map(|a| a * c).collect())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{}", i),
            };
            let term = if i == 0 {
                fmt_q(c)
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{}", mono)
            } else {
                format!("{}*{}", fmt_q(c), mono)
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{}", s)
    }
}

/// A finite Galois extension F/Q given by a monic irreducible integer
/// polynomial, with its embeddings, automorphisms and roots of unity
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct WorkingField {
    defining_poly: Poly,
    degree: usize,
    /// `t^(d+k)` reduced to the power basis, k = 0..d-1; integral since
    /// the defining polynomial is monic over Z
    reduction: Vec<Vec<BigInt>>,
    precision: u32,
    embeddings: Vec<IsolatedRoot>,
    real_places: usize,
    automorphisms: Vec<FieldElement>,
    /// per automorphism: numerators of `s(t)^j` for j < d, and their
    /// common denominator
    aut_matrices: Vec<(Vec<Vec<BigInt>>, BigInt)>,
    composition: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    embedding_action: Vec<Vec<usize>>,
    torsion_order: u64,
    torsion_generator: FieldElement,
    /// Tr(t^k) for k < d
    power_sums: Vec<Q>,
}

/// Coordinates of `a` times `den`, which must be a multiple of every
/// coordinate denominator.
fn scaled_numerators(a: &FieldElement, den: &BigInt) -> Vec<BigInt> {
    a.coords.iter().map(|c| c.numer() * (den / c.denom())).collect()
}

fn from_numerators(nums: Vec<BigInt>, den: &BigInt) -> FieldElement {
    FieldElement::from_coords(nums.into_iter().map(|n| Q::new(n, den.clone())).collect())
}

/// Index of an automorphism in [`WorkingField::automorphisms`]; 0 is the identity.
pub type AutId = usize;

impl WorkingField {
    pub fn new(defining_poly: Poly) -> Result<Self> {
        Self::with_precision(defining_poly, configured_precision())
    }

    pub fn with_precision(defining_poly: Poly, precision: u32) -> Result<Self> {
        let d = match defining_poly.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidInput("defining polynomial must have degree >= 1".into())),
        };
        if !defining_poly.is_monic() || !defining_poly.has_integer_coeffs() {
            return Err(Error::InvalidInput(
                "defining polynomial must be monic with integer coefficients".into(),
            ));
        }
        let fac = factor_over_q(&defining_poly);
        if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
            return Err(Error::ReduciblePolynomial);
        }
        let mut reduction = Vec::with_capacity(d);
        let mut cur: Vec<Q> = defining_poly.coeffs()[..d].iter().map(|c| -c).collect();
        for _ in 0..d {
            reduction.push(cur.clone());
            // multiply by t
            let top = cur[d - 1].clone();
            let mut next = vec![Q::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone() + &top * &reduction[0][i];
            }
            next[0] = &top * &reduction[0][0];
            cur = next;
        }
        let reduction: Vec<Vec<BigInt>> =
            reduction.into_iter().map(|r| r.into_iter().map(|c| c.to_integer()).collect()).collect();
        let embeddings = isolate_roots(&defining_poly, precision)?;
        let real_places = embeddings.iter().filter(|r| r.is_real).count();
        let mut field = WorkingField {
            defining_poly,
            degree: d,
            reduction,
            precision,
            embeddings,
            real_places,
            automorphisms: Vec::new(),
            aut_matrices: Vec::new(),
            composition: Vec::new(),
            inverses: Vec::new(),
            embedding_action: Vec::new(),
            torsion_order: 2,
            torsion_generator: FieldElement::from_coords(Vec::new()),
            power_sums: Vec::new(),
        };
        field.power_sums = newton_power_sums(&field.defining_poly);
        field.torsion_generator = field.from_int(-1);

        let theta = field.theta();
        let mut auts = field.roots_in_field(&field.defining_poly.clone());
        if auts.len() != d {
            return Err(Error::NotGalois { found: auts.len(), degree: d });
        }
        auts.sort_by(|a, b| match (a == &theta, b == &theta) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => a.cmp(b),
        });
        field.aut_matrices = auts
            .iter()
            .map(|img| {
                let mut pw = field.one();
                let mut cols = Vec::with_capacity(d);
                for _ in 0..d {
                    cols.push(pw.clone());
                    pw = field.mul(&pw, img);
                }
                let den = cols.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
                let nums = cols.iter().map(|c| scaled_numerators(c, &den)).collect();
                (nums, den)
            })
            .collect();
        field.automorphisms = auts;
        field.build_group_tables()?;
        field.compute_torsion();
        Ok(field)
    }

    fn build_group_tables(&mut self) -> Result<()> {
        let d = self.degree;
        let mut comp = vec![vec![0; d]; d];
        for i in 0..d {
            for j in 0..d {
                // (s_i o s_j)(t) = s_i(s_j(t))
                let img = self.apply_automorphism(i, &self.automorphisms[j].clone());
                let k = self
                    .automorphisms
                    .iter()
                    .position(|a| *a == img)
                    .expect("automorphisms are closed under composition");
                comp[i][j] = k;
            }
        }
        let inverses = (0..d)
            .map(|i| (0..d).find(|&j| comp[i][j] == 0).expect("group inverse"))
            .collect();
        self.composition = comp;
        self.inverses = inverses;
        let mut action = Vec::with_capacity(d);
        for s in 0..d {
            let coeffs = self.automorphisms[s].coords().to_vec();
            let mut perm = Vec::with_capacity(d);
            for root in &self.embeddings {
                let (v, err) = root.eval(&coeffs);
                let j = match_root(&self.embeddings, &v, err)
                    .ok_or(Error::PrecisionExhausted { bits: self.precision })?;
                perm.push(j);
            }
            let mut seen = perm.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != d {
                return Err(Error::PrecisionExhausted { bits: self.precision });
            }
            action.push(perm);
        }
        self.embedding_action = action;
        Ok(())
    }

    fn compute_torsion(&mut self) {
        let d = self.degree as u64;
        let disc = self.defining_poly.discriminant().to_integer();
        let frobenius = self.residue_degrees(&disc, 24);
        let mut best: (u64, FieldElement) = (2, self.from_int(-1));
        let limit = 2 * d * d + 2;
        for n in 3..=limit {
            let phi = totient(n);
            if phi > d || !d.is_multiple_of(phi) || n % 4 == 2 {
                continue;
            }
            // every prime dividing n (except 2 when 4 does not divide n) ramifies
            let ramified = prime_divisors(n).iter().all(|&q| (&disc % BigInt::from(q)).is_zero());
            if !ramified {
                continue;
            }
            // if Q(zeta_n) sits inside F, the order of p mod n divides the
            // residue degree of every unramified p not dividing n
            let excluded = frobenius
                .iter()
                .any(|&(p, f)| n % p != 0 && !(f as u64).is_multiple_of(multiplicative_order(p % n, n)));
            if excluded {
                continue;
            }
            let roots = self.roots_in_field(&cyclotomic_poly(n));
            if let Some(z) = roots.into_iter().next() {
                let lcm = best.0.lcm(&n);
                if lcm > best.0 {
                    let gen = if lcm == n {
                        z
                    } else {
                        // product of coprime-order generators
                        self.mul(&best.1, &z)
                    };
                    best = (lcm, gen);
                }
            }
        }
        // the group is cyclic; make sure the generator really has full order
        let (w, mut g) = best;
        if !self.pow(&g, w as i64).is_one() {
            g = self.roots_in_field(&cyclotomic_poly(w)).into_iter().next().unwrap_or(g);
        }
        self.torsion_order = w;
        self.torsion_generator = g;
    }

    /// `(p, f)` for the first `count` odd primes not dividing the
    /// discriminant; in a Galois field all primes above p share f.
    fn residue_degrees(&self, disc: &BigInt, count: usize) -> Vec<(u64, usize)> {
        let (_, m) = self.defining_poly.primitive_integer();
        primes_from(3)
            .filter(|&p| !(disc % BigInt::from(p)).is_zero())
            .take(count)
            .map(|p| {
                let fp = Fp::new(p);
                let mp: Vec<u64> = m.iter().map(|c| fp.from_bigint(c)).collect();
                let f = fp.factor_squarefree(&mp).iter().map(|g| g.len() - 1).max().unwrap_or(1);
                (p, f)
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn defining_poly(&self) -> &Poly {
        &self.defining_poly
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn embeddings(&self) -> &[IsolatedRoot] {
        &self.embeddings
    }

    /// Number of real embeddings r1; the complex ones come in r2 conjugate pairs.
    pub fn real_places(&self) -> usize {
        self.real_places
    }

    pub fn complex_places(&self) -> usize {
        (self.degree - self.real_places) / 2
    }

    pub fn automorphisms(&self) -> &[FieldElement] {
        &self.automorphisms
    }

    pub fn group_order(&self) -> usize {
        self.automorphisms.len()
    }

    /// Index of `s o t`.
    pub fn compose(&self, s: AutId, t: AutId) -> AutId {
        self.composition[s][t]
    }

    pub fn inverse(&self, s: AutId) -> AutId {
        self.inverses[s]
    }

    /// For automorphism `s` and embedding `k`, the index `j` with
    /// `phi_k(s(x)) = phi_j(x)` for all x.
    pub fn embedding_action(&self, s: AutId) -> &[usize] {
        &self.embedding_action[s]
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    /// A primitive root of unity of order `torsion_order`.
    pub fn torsion_generator(&self) -> &FieldElement {
        &self.torsion_generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_coords(vec![Q::zero(); self.degree])
    }

    pub fn one(&self) -> FieldElement {
        self.from_q(Q::one())
    }

    pub fn from_q(&self, c: Q) -> FieldElement {
        let mut v = vec![Q::zero(); self.degree];
        v[0] = c;
        FieldElement::from_coords(v)
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        self.from_q(Q::from_integer(c.into()))
    }

    /// The generator t, a root of the defining polynomial.
    pub fn theta(&self) -> FieldElement {
        self.from_poly(&Poly::x())
    }

    /// Reduces an arbitrary rational polynomial in t modulo m_F.
    pub fn from_poly(&self, p: &Poly) -> FieldElement {
        let d = self.degree;
        let mut v = vec![Q::zero(); d];
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < d {
                v[i] += c;
            } else {
                // t^i = t^(i-d) * t^d; fold through the reduction table
                let red = self.power_of_theta(i);
                for (k, r) in red.iter().enumerate() {
                    v[k] += c * r;
                }
            }
        }
        FieldElement::from_coords(v)
    }

    fn power_of_theta(&self, i: usize) -> Vec<Q> {
        let d = self.degree;
        let mut cur = self.reduction[(i - d).min(d - 1)].clone();
        for _ in (2 * d - 1)..i {
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            for k in (1..d).rev() {
                next[k] = &cur[k - 1] + &top * &self.reduction[0][k];
            }
            next[0] = &top * &self.reduction[0][0];
            cur = next;
        }
        cur.into_iter().map(Q::from_integer).collect()
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        if a.is_rational() {
            return b.scale(&a.coords[0]);
        }
        if b.is_rational() {
            return a.scale(&b.coords[0]);
        }
        // integer convolution over a common denominator
        let (da, db) = (a.denominator(), b.denominator());
        let (na, nb) = (scaled_numerators(a, &da), scaled_numerators(b, &db));
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.reduction[k].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * r;
                }
            }
        }
        from_numerators(out, &(da * db))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::EvalError("division by zero in the field".into()));
        }
        if a.is_rational() {
            return Ok(self.from_q(a.coords[0].recip()));
        }
        // clear denominators, then solve M_A x = e_0 fraction-free
        let den = a.denominator();
        let dq = Q::from_integer(den.clone());
        let ints: Vec<BigInt> = a.coords.iter().map(|c| (c * &dq).to_integer()).collect();
        let x = self.solve_multiplication(&ints);
        Ok(FieldElement::from_coords(x.into_iter().map(|c| c * &dq).collect()))
    }

    /// Solves `A * x = 1` where A has integer coordinates, by Bareiss
    /// elimination on the multiplication matrix (integral since m_F is monic).
    fn solve_multiplication(&self, a: &[BigInt]) -> Vec<Q> {
        let d = self.degree;
        // column j is A * t^j
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        let mut cur = FieldElement::from_coords(a.iter().map(|c| Q::from_integer(c.clone())).collect());
        let theta = self.theta();
        for j in 0..d {
            cols.push(cur.coords.iter().map(|c| c.to_integer()).collect());
            if j + 1 < d {
                cur = self.mul(&cur, &theta);
            }
        }
        let mut m: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigInt> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigInt::one() } else { BigInt::zero() });
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..d {
            let piv = (k..d).find(|&i| !m[i][k].is_zero()).expect("nonzero element is invertible");
            m.swap(k, piv);
            for i in (k + 1)..d {
                for j in (k + 1)..=d {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut x = vec![Q::zero(); d];
        for i in (0..d).rev() {
            let mut acc = Q::from_integer(m[i][d].clone());
            for j in (i + 1)..d {
                acc -= &x[j] * Q::from_integer(m[i][j].clone());
            }
            x[i] = acc / Q::from_integer(m[i][i].clone());
        }
        x
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`; negative exponents invert (and panic on zero).
    pub fn pow(&self, a: &FieldElement, e: i64) -> FieldElement {
        let base = if e < 0 {
            self.inv(a).expect("negative power of zero")
        } else {
            a.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &FieldElement, e: &BigInt) -> FieldElement {
        let base = if e.is_negative() {
            self.inv(a).expect("negative power of zero")
        } else {
            a.clone()
        };
        let e = e.abs();
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
        }
        acc
    }

    pub fn product<'a>(&self, it: impl IntoIterator<Item = &'a FieldElement>) -> FieldElement {
        it.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Evaluates a rational polynomial at a field element.
    pub fn eval_poly(&self, p: &Poly, a: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, a);
            acc.coords[0] += c;
        }
        acc
    }

    /// `s(a)`: substitutes the image of t under automorphism `s` into the
    /// coordinate polynomial of `a`.
    pub fn apply_automorphism(&self, s: AutId, a: &FieldElement) -> FieldElement {
        if s == 0 && !self.automorphisms.is_empty() {
            return a.clone();
        }
        let (cols, den) = &self.aut_matrices[s];
        let da = a.denominator();
        let na = scaled_numerators(a, &da);
        let mut out = vec![BigInt::zero(); self.degree];
        for (x, col) in na.iter().zip(cols) {
            if x.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                if !c.is_zero() {
                    *o += x * c;
                }
            }
        }
        from_numerators(out, &(da * den))
    }

    /// Exact field norm N_{F/Q}(a) = Res(m_F, a).
    pub fn norm(&self, a: &FieldElement) -> Q {
        if a.is_rational() {
            return num_traits::pow(a.coords[0].clone(), self.degree);
        }
        self.defining_poly.resultant(&a.as_poly())
    }

    /// Trace, linear in the coordinates via power sums of the roots of m_F.
    pub fn trace(&self, a: &FieldElement) -> Q {
        a.coords.iter().zip(&self.power_sums).map(|(c, t)| c * t).sum()
    }

    /// `det(x - M_a)`, computed by interpolating exact norms.
    pub fn characteristic_polynomial(&self, a: &FieldElement) -> Poly {
        let d = self.degree;
        if a.is_rational() {
            return Poly::linear(a.coords[0].clone()).pow(d as u32);
        }
        let pts: Vec<(Q, Q)> = (0..=d as i64)
            .map(|k| {
                let x = Q::from_integer(k.into());
                let e = self.from_q(x.clone()).sub(a);
                (x, self.norm(&e))
            })
            .collect();
        Poly::interpolate(&pts)
    }

    /// Monic minimal polynomial over Q. The characteristic polynomial is a
    /// power of it, so its squarefree part is the answer.
    pub fn minimal_polynomial(&self, a: &FieldElement) -> Poly {
        if a.is_rational() {
            return Poly::linear(a.coords[0].clone());
        }
        self.characteristic_polynomial(a).squarefree_part()
    }

    /// All roots of `p` lying in F, sorted, each verified exactly.
    pub fn roots_in_field(&self, p: &Poly) -> Vec<FieldElement> {
        assert!(!p.is_zero(), "roots of the zero polynomial");
        let d = self.degree;
        let mut out = Vec::new();
        if p.deg() == 0 {
            return out;
        }
        for (q, _) in factor_over_q(p).factors {
            let e = q.deg();
            if e == 1 {
                out.push(self.from_q(-q.coeff(0) / q.coeff(1)));
            } else if d.is_multiple_of(e) {
                out.extend(self.linear_factors_trager(&q.monic()));
            }
        }
        out.retain(|r| self.eval_poly(p, r).is_zero());
        out.sort();
        out.dedup();
        out
    }

    /// Roots in F of a monic irreducible `q` via Trager's norm method:
    /// pick a shift s with Norm(q(x - s t)) squarefree, factor the norm over
    /// Q, and take gcds over F.
    fn linear_factors_trager(&self, q: &Poly) -> Vec<FieldElement> {
        let d = self.degree;
        let e = q.deg();
        let theta = self.theta();
        for s in [1i64, -1, 2, -2, 3, -3, 4, -4, 5, -5, 7, 11] {
            let st = theta.scale(&Q::from_integer(s.into()));
            let n = e * d;
            let pts: Vec<(Q, Q)> = (0..=n as i64)
                .map(|k| {
                    let x = self.from_int(k).sub(&st);
                    (Q::from_integer(k.into()), self.norm(&self.eval_poly(q, &x)))
                })
                .collect();
            let norm = Poly::interpolate(&pts);
            if !norm.is_squarefree() {
                continue;
            }
            let mut roots = Vec::new();
            let qf = FPoly::from_rational(self, q);
            for (h, _) in factor_over_q(&norm).factors {
                if h.deg() != d {
                    continue;
                }
                // h(x + s t)
                let shift = FPoly { coeffs: vec![st.clone(), self.one()] };
                let hs = FPoly::from_rational(self, &h).compose(self, &shift);
                let g = qf.gcd(self, &hs);
                if g.degree() == Some(1) {
                    let r = self
                        .div(&g.coeffs[0], &g.coeffs[1])
                        .expect("monic gcd")
                        .neg();
                    roots.push(r);
                }
            }
            return roots;
        }
        Vec::new()
    }
}

/// Polynomials with coefficients in F.
#[derive(Clone, Debug)]
struct FPoly {
    coeffs: Vec<FieldElement>,
}

impl FPoly {
    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    fn from_rational(f: &WorkingField, p: &Poly) -> Self {
        FPoly { coeffs: p.coeffs().iter().map(|c| f.from_q(c.clone())).collect() }.trim()
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn mul(&self, f: &WorkingField, o: &FPoly) -> FPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return FPoly { coeffs: Vec::new() };
        }
        let mut out = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&f.mul(a, b));
            }
        }
        FPoly { coeffs: out }.trim()
    }

    fn compose(&self, f: &WorkingField, inner: &FPoly) -> FPoly {
        let mut acc = FPoly { coeffs: Vec::new() };
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(f, inner);
            if acc.coeffs.is_empty() {
                acc.coeffs.push(f.zero());
            }
            acc.coeffs[0] = acc.coeffs[0].add(c);
            acc = acc.trim();
        }
        acc
    }

    fn rem(&self, f: &WorkingField, d: &FPoly) -> FPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.coeffs.last().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = f.mul(r.last().unwrap(), &inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&f.mul(&c, dc));
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        FPoly { coeffs: r }.trim()
    }

    fn gcd(&self, f: &WorkingField, o: &FPoly) -> FPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while b.degree().is_some() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        let inv = f.inv(a.coeffs.last().unwrap()).unwrap();
        FPoly { coeffs: a.coeffs.iter().map(|c| f.mul(c, &inv)).collect() }
    }
}

pub fn cyclotomic_poly(n: u64) -> Poly {
    // x^n - 1 divided by Phi_k for every proper divisor k
    let mut c = vec![Q::zero(); n as usize + 1];
    c[0] = -Q::one();
    c[n as usize] = Q::one();
    let mut p = Poly::new(c);
    for k in 1..n {
        if n.is_multiple_of(k) {
            p = p.exact_div(&cyclotomic_poly(k));
        }
    }
    p
}

/// Power sums of the roots of a monic polynomial, p_0 .. p_{d-1}.
fn newton_power_sums(m: &Poly) -> Vec<Q> {
    let d = m.deg();
    let a = |i: usize| m.coeff(i);
    let mut ps = vec![Q::from_integer(BigInt::from(d))];
    for k in 1..d {
        let mut s = Q::from_integer(BigInt::from(k)) * a(d - k);
        for i in 1..k {
            s += a(d - i) * &ps[k - i];
        }
        ps.push(-s);
    }
    ps
}

fn multiplicative_order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    k
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
