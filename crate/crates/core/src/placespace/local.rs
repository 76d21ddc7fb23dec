//! Prime ideals above a rational prime p and exact valuations at them.
//!
//! The splitting is read off the factorization of a generator's minimal
//! polynomial modulo p. The defining generator t is used when p does not
//! divide the index of Z[t]; otherwise a p-maximal order is built by
//! enlargement and a generator of it with the right discriminant is
//! searched for.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{q_valuation, valuation, Q};
use crate::error::{Error, Result};
use crate::numberfield::factor::lift_coprime_factorization;
use crate::numberfield::modular::{Fp, PolyFp};
use crate::numberfield::{AutId, FieldElement, Poly, WorkingField};

/// Largest p^k enumerated while enlarging the order.
const ENLARGE_LIMIT: u64 = 50_000;
const GENERATOR_ATTEMPTS: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    /// ramification index
    pub e: u32,
    /// residue degree
    pub f: u32,
    /// the irreducible factor mod p whose lift, evaluated at the
    /// generator, together with p generates the ideal
    pub residue_factor: PolyFp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub e: u32,
    pub f: u32,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactorization {
    pub p: u64,
    pub factors: Vec<LocalFactor>,
}

/// Everything needed to compute valuations above one prime.
#[derive(Clone, Debug)]
pub struct LocalPrime {
    p: u64,
    generator: FieldElement,
    generator_poly: Poly,
    /// rows map power-basis coordinates to coordinates on 1, g, .., g^(d-1)
    to_generator_basis: Vec<Vec<Q>>,
    residue_parts: Vec<PolyFp>,
    ideals: Vec<PrimeIdeal>,
    index_exponent: u32,
}

impl LocalPrime {
    pub fn new(f: &WorkingField, p: u64) -> Result<LocalPrime> {
        let fp = Fp::new(p);
        let m = f.defining_poly().clone();
        let theta = f.theta();
        if dedekind_criterion(&m, &fp) {
            return LocalPrime::with_generator(f, p, theta, m, 0);
        }
        let (basis, steps) = p_maximal_basis(f, p)?;
        let disc_v = q_valuation(&m.discriminant(), &BigInt::from(p)) - 2 * steps as i64;
        let gamma = find_generator(f, p, &basis, disc_v)?;
        let g = f.characteristic_polynomial(&gamma);
        LocalPrime::with_generator(f, p, gamma, g, steps)
    }

    fn with_generator(f: &WorkingField, p: u64, gamma: FieldElement, g: Poly, steps: u32) -> Result<LocalPrime> {
        let fp = Fp::new(p);
        let gbar = reduce(&g, &fp);
        let parts = fp.factor(&gbar);
        let ideals: Vec<PrimeIdeal> = parts
            .iter()
            .map(|(h, e)| PrimeIdeal { e: *e, f: (h.len() - 1) as u32, residue_factor: h.clone() })
            .collect();
        let residue_parts = parts
            .iter()
            .map(|(h, e)| (0..*e).fold(vec![1u64], |acc, _| fp.poly_mul(&acc, h)))
            .collect();
        let d = f.degree();
        let mut cols = Vec::with_capacity(d);
        let mut pw = f.one();
        for _ in 0..d {
            cols.push(pw.coords().to_vec());
            pw = f.mul(&pw, &gamma);
        }
        // matrix with the powers of gamma as columns
        let mat: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let inv = invert(&mat).ok_or_else(|| Error::IndexDivisor { p: p.to_string() })?;
        Ok(LocalPrime {
            p,
            generator: gamma,
            generator_poly: g,
            to_generator_basis: inv,
            residue_parts,
            ideals,
            index_exponent: steps,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ideals(&self) -> &[PrimeIdeal] {
        &self.ideals
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// Exponent of p in the index of Z[t] in the ring of integers.
    pub fn index_exponent(&self) -> u32 {
        self.index_exponent
    }

    /// `v_P(a)` for every ideal P above p, in ideal order.
    pub fn valuations(&self, f: &WorkingField, a: &FieldElement) -> Result<Vec<i64>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let d = f.degree();
        let pb = BigInt::from(self.p);
        let coords: Vec<Q> = self
            .to_generator_basis
            .iter()
            .map(|row| row.iter().zip(a.coords()).map(|(x, y)| x * y).sum())
            .collect();
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let dq = Q::from_integer(den.clone());
        let num = Poly::new(coords.iter().map(|c| c * &dq).collect());
        let v_den = valuation(&den, &pb) as i64;
        let v_norm = q_valuation(&f.norm(a), &pb);
        let v_norm_num = d as i64 * v_den + v_norm;
        if v_norm_num < 0 {
            return Err(Error::IndexDivisor { p: self.p.to_string() });
        }
        let lifted = lift_coprime_factorization(
            &self.generator_poly,
            &self.residue_parts,
            self.p,
            v_norm_num as u32 + 1,
        );
        let mut out = Vec::with_capacity(self.ideals.len());
        let mut check = 0i64;
        for (ideal, big) in self.ideals.iter().zip(lifted) {
            let local = Poly::from_bigints(&big);
            let r = local.resultant(&num);
            if r.is_zero() || !r.is_integer() {
                return Err(Error::IndexDivisor { p: self.p.to_string() });
            }
            let vr = valuation(&r.to_integer(), &pb) as i64;
            if vr % ideal.f as i64 != 0 {
                return Err(Error::IndexDivisor { p: self.p.to_string() });
            }
            let v = vr / ideal.f as i64 - ideal.e as i64 * v_den;
            check += ideal.f as i64 * v;
            out.push(v);
        }
        if check != v_norm {
            return Err(Error::IndexDivisor { p: self.p.to_string() });
        }
        Ok(out)
    }

    pub fn local_factorization(&self, f: &WorkingField, a: &FieldElement) -> Result<LocalFactorization> {
        let vals = self.valuations(f, a)?;
        Ok(LocalFactorization {
            p: self.p,
            factors: self
                .ideals
                .iter()
                .zip(vals)
                .map(|(i, v)| LocalFactor { e: i.e, f: i.f, valuation: v })
                .collect(),
        })
    }

    /// `perm[i] = j` when `s` maps the i-th ideal onto the j-th.
    pub fn ideal_permutation(&self, f: &WorkingField, s: AutId) -> Result<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.ideals.len());
        for ideal in &self.ideals {
            // positive valuation at this ideal only
            let lift = Poly::from_bigints(
                &ideal.residue_factor.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(),
            );
            let u = f.eval_poly(&lift, &self.generator);
            let u = if u.is_zero() { f.from_int(self.p as i64) } else { u };
            let img = f.apply_automorphism(s, &u);
            let vals = self.valuations(f, &img)?;
            let own = self.valuations(f, &u)?;
            let target = own[perm.len()];
            let hits: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] > 0 && vals[j] == target).collect();
            match hits.as_slice() {
                [j] => perm.push(*j),
                _ => return Err(Error::IndexDivisor { p: self.p.to_string() }),
            }
        }
        Ok(perm)
    }
}

fn reduce(g: &Poly, fp: &Fp) -> PolyFp {
    fp.trim(g.coeffs().iter().map(|c| fp.from_q(c).expect("p-integral coefficient")).collect())
}

fn lift(h: &[u64]) -> Poly {
    Poly::from_bigints(&h.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
}

/// Dedekind's criterion: p does not divide the index of Z[x]/(g).
fn dedekind_criterion(g: &Poly, fp: &Fp) -> bool {
    let p = BigInt::from(fp.p);
    let disc = g.discriminant();
    if q_valuation(&disc, &p) < 2 {
        return true;
    }
    let gbar = reduce(g, fp);
    let parts = fp.factor(&gbar);
    let radical = parts.iter().fold(Poly::one(), |acc, (h, _)| &acc * &lift(h));
    let mut cofactor = vec![1u64];
    for (h, e) in &parts {
        for _ in 1..*e {
            cofactor = fp.poly_mul(&cofactor, h);
        }
    }
    let rest = &radical * &lift(&cofactor);
    let diff = g - &rest;
    let scaled = diff.scale(&Q::new(BigInt::one(), p));
    let fbar = reduce(&scaled, fp);
    let gcd1 = fp.gcd(&fbar, &reduce(&radical, fp));
    let gcd2 = fp.gcd(&gcd1, &cofactor);
    gcd2.len() == 1
}

/// Basis of the p-maximal order (as field elements) and the exponent of p
/// in its index over Z[t].
fn p_maximal_basis(f: &WorkingField, p: u64) -> Result<(Vec<FieldElement>, u32)> {
    let d = f.degree();
    let fp = Fp::new(p);
    let pq = Q::from_integer(BigInt::from(p));
    let mut basis: Vec<FieldElement> = (0..d).map(|i| f.pow(&f.theta(), i as i64)).collect();
    let mut steps = 0u32;
    loop {
        // necessary condition: Tr(x * b_j) integral for x = (sum c_i b_i)/p
        let trace_rows: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| fp.from_q(&f.trace(&f.mul(&basis[i], &basis[j]))).expect("integral trace"))
                    .collect()
            })
            .collect();
        let kernel = left_kernel_mod_p(&trace_rows, &fp);
        let k = kernel.len() as u32;
        if k == 0 {
            return Ok((basis, steps));
        }
        if (p as f64).powi(k as i32) > ENLARGE_LIMIT as f64 {
            return Err(Error::IndexDivisor { p: p.to_string() });
        }
        let mut found: Vec<Vec<u64>> = Vec::new();
        let total = p.pow(k);
        for idx in 1..total {
            let mut digits = Vec::with_capacity(kernel.len());
            let mut r = idx;
            for _ in &kernel {
                digits.push(r % p);
                r /= p;
            }
            // integrality is unchanged by unit multiples, so take one
            // vector per line: first nonzero digit equal to 1
            if digits.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            let mut c = vec![0u64; d];
            for (digit, kv) in digits.iter().zip(&kernel) {
                for (ci, kc) in c.iter_mut().zip(kv) {
                    *ci = fp.add(*ci, fp.mul(*digit, *kc));
                }
            }
            if in_span(&found, &c, &fp) {
                continue;
            }
            let x = combine(f, &basis, &c).scale(&pq.recip());
            if !f.norm(&x).is_integer() {
                continue;
            }
            if f.characteristic_polynomial(&x).has_integer_coeffs() {
                found.push(c);
                found = row_reduce(found, &fp);
            }
        }
        if found.is_empty() {
            return Ok((basis, steps));
        }
        for row in &found {
            let pivot = row.iter().position(|&c| c != 0).unwrap();
            basis[pivot] = combine(f, &basis, row).scale(&pq.recip());
        }
        steps += found.len() as u32;
    }
}

fn combine(f: &WorkingField, basis: &[FieldElement], c: &[u64]) -> FieldElement {
    basis
        .iter()
        .zip(c)
        .filter(|(_, &ci)| ci != 0)
        .fold(f.zero(), |acc, (b, &ci)| acc.add(&b.scale(&Q::from_integer(BigInt::from(ci)))))
}

/// Searches small combinations of the basis for an element whose minimal
/// polynomial has p-adic discriminant valuation equal to that of the field.
fn find_generator(f: &WorkingField, p: u64, basis: &[FieldElement], disc_v: i64) -> Result<FieldElement> {
    let d = f.degree();
    let pb = BigInt::from(p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e4e ^ p);
    let mut candidates: Vec<FieldElement> = Vec::new();
    for i in 1..d {
        candidates.push(basis[i].clone());
        for j in 1..i {
            candidates.push(basis[i].add(&basis[j]));
        }
    }
    for attempt in 0..GENERATOR_ATTEMPTS {
        let gamma = if attempt < candidates.len() {
            candidates[attempt].clone()
        } else {
            let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
            basis
                .iter()
                .zip(&c)
                .fold(f.zero(), |acc, (b, &ci)| acc.add(&b.scale(&Q::from_integer(ci.into()))))
        };
        let g = f.characteristic_polynomial(&gamma);
        if !g.has_integer_coeffs() || !g.is_squarefree() {
            continue;
        }
        if q_valuation(&g.discriminant(), &pb) == disc_v {
            return Ok(gamma);
        }
    }
    Err(Error::IndexDivisor { p: p.to_string() })
}

/// Basis of `{c : c * M = 0}` over F_p.
fn left_kernel_mod_p(m: &[Vec<u64>], fp: &Fp) -> Vec<Vec<u64>> {
    let n = m.len();
    // transpose, then right kernel
    let mut a: Vec<Vec<u64>> = (0..m[0].len()).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, piv);
        let inv = fp.inv(a[r][col]);
        for x in a[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][col] != 0 {
                let factor = a[i][col];
                for j in 0..n {
                    let v = fp.mul(factor, a[r][j]);
                    a[i][j] = fp.sub(a[i][j], v);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = fp.sub(0, a[row][fc]);
            }
            v
        })
        .collect()
}

/// Reduced row echelon form with unit pivots; drops zero rows.
fn row_reduce(mut rows: Vec<Vec<u64>>, fp: &Fp) -> Vec<Vec<u64>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, piv);
        let inv = fp.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for j in 0..n {
                    let v = fp.mul(factor, rows[r][j]);
                    rows[i][j] = fp.sub(rows[i][j], v);
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn in_span(rows: &[Vec<u64>], v: &[u64], fp: &Fp) -> bool {
    let mut all: Vec<Vec<u64>> = rows.to_vec();
    all.push(v.to_vec());
    row_reduce(all, fp).len() == rows.len()
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &factor * &a[col][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Converts a prime to the machine word the modular code works with.
pub fn small_prime(p: &BigInt) -> Result<u64> {
    if !p.is_positive() {
        return Err(Error::InvalidInput(format!("{} is not a prime", p)));
    }
    p.to_u64()
        .filter(|&x| x < (1 << 62))
        .ok_or_else(|| Error::InvalidInput(format!("prime {} exceeds the supported range", p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn field(c: &[i64]) -> WorkingField {
        WorkingField::new(Poly::from_ints(c)).unwrap()
    }

    #[test]
    fn sqrt2_at_two_and_three() {
        let f = field(&[-2, 0, 1]);
        let lp = LocalPrime::new(&f, 2).unwrap();
        assert_eq!(lp.ideals().len(), 1);
        assert_eq!((lp.ideals()[0].e, lp.ideals()[0].f), (2, 1));
        assert_eq!(lp.valuations(&f, &f.theta()).unwrap(), vec![1]);
        assert_eq!(lp.valuations(&f, &f.from_q(qf(1, 2))).unwrap(), vec![-2]);

        let lp3 = LocalPrime::new(&f, 3).unwrap();
        let lf = lp3.local_factorization(&f, &f.from_int(3)).unwrap();
        let s: i64 = lf.factors.iter().map(|x| x.f as i64 * x.valuation).sum();
        assert_eq!(s, 2);
        // x^2 - 2 is irreducible mod 3
        assert_eq!(lf.factors, vec![LocalFactor { e: 1, f: 2, valuation: 1 }]);
    }

    #[test]
    fn split_prime_permutes() {
        let f = field(&[-2, 0, 1]);
        // 7 = (3 + t)(3 - t)
        let lp = LocalPrime::new(&f, 7).unwrap();
        assert_eq!(lp.ideals().len(), 2);
        let a = f.from_int(3).add(&f.theta());
        let v = lp.valuations(&f, &a).unwrap();
        assert_eq!(v.iter().sum::<i64>(), 1);
        let perm = lp.ideal_permutation(&f, 1).unwrap();
        assert_eq!(perm, vec![1, 0]);
        let w = lp.valuations(&f, &f.apply_automorphism(1, &a)).unwrap();
        assert_eq!(w, vec![v[1], v[0]]);
    }

    #[test]
    fn biquadratic_index_divisor_at_two() {
        let f = field(&[1, 0, -10, 0, 1]);
        let lp = LocalPrime::new(&f, 2).unwrap();
        assert!(lp.index_exponent() > 0);
        let total: u32 = lp.ideals().iter().map(|i| i.e * i.f).sum();
        assert_eq!(total, 4);
        // sqrt2 = (t^3 - 9t)/2 has valuation e/2 at the unique prime above 2
        let s2 = f.from_poly(&Poly::new(vec![q(0), qf(-9, 2), q(0), qf(1, 2)]));
        let v = lp.valuations(&f, &s2).unwrap();
        assert_eq!(v, vec![2]);
        assert_eq!(lp.ideals()[0].e, 4);
    }
}
