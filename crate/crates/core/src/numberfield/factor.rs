//! Factorization over Q: squarefree decomposition, modular factorization,
//! multifactor Hensel lifting and exhaustive recombination (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{Fp, PolyFp};
use super::poly::Poly;
use crate::arith::{primes_from, Q};

/// Irreducible factors over Q with multiplicities.
///
/// `content * prod f_i^e_i` equals the input exactly. Each factor is a
/// primitive integer polynomial with positive leading coefficient; factors
/// are sorted by degree and then by coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: Q,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.content.clone()), |acc, (f, e)| &acc * &f.pow(*e))
    }
}

pub fn factor_over_q(f: &Poly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (part, e) in f.squarefree_decomposition() {
        let (_, prim) = part.primitive_integer();
        for g in zassenhaus(&prim) {
            factors.push((Poly::from_bigints(&g), e));
        }
    }
    factors.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    let unit = factors.iter().fold(Poly::one(), |acc, (g, e)| &acc * &g.pow(*e));
    let content = f.lc() / unit.lc();
    Factorization { content, factors }
}

pub fn is_irreducible(f: &Poly) -> bool {
    if f.degree().is_none_or(|d| d == 0) {
        return false;
    }
    let fac = factor_over_q(f);
    fac.factors.len() == 1 && fac.factors[0].1 == 1
}

fn cmp_poly(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut f: ZPoly) -> ZPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsym(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut rem = zmod(a, m);
    let db = b.len() - 1;
    debug_assert!(b.last().unwrap().is_one());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quo.len()).rev() {
        let c = rem[i + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] = (&rem[i + j] - &c * bj).mod_floor(m);
            }
        }
        quo[i] = c;
    }
    rem.truncate(db);
    (ztrim(quo), zmod(&rem, m))
}

/// Exact division over Z; `None` if `b` does not divide `a`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut rem = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len() - db];
    for i in (0..quo.len()).rev() {
        let (c, r) = rem[i + db].div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quo[i] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(ztrim(quo))
    } else {
        None
    }
}

fn zprimitive(a: &[BigInt]) -> ZPoly {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return a.to_vec();
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn to_fp(fp: &Fp, a: &[BigInt]) -> PolyFp {
    fp.trim(a.iter().map(|c| fp.from_bigint(c)).collect())
}

fn from_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step (von zur Gathen and Gerhard, Algorithm 15.10)
/// taking `f = g h`, `s g + t h = 1` from modulus `m` to `m^2`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zmod(&zsub(f, &zmul(g, h)), m2);
    let (qt, r) = zdivrem_monic(&zmul(s, &e), h, m2);
    let g1 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&qt, g)), m2);
    let h1 = zmod(&zadd(h, &r), m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &[BigInt::one()]), m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h1, m2);
    let s1 = zmod(&zsub(s, &d), m2);
    let t1 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g1)), m2);
    (g1, h1, s1, t1)
}

/// Lifts `f = prod factors (mod p)` to a factorization modulo `modulus`,
/// a power of p. `f` must be monic modulo `modulus` and the factors monic and
/// pairwise coprime modulo p.
pub fn multifactor_lift(f: &[BigInt], factors: &[PolyFp], fp: &Fp, modulus: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![zmod(f, modulus)];
    }
    let k = factors.len() / 2;
    let prod = |fs: &[PolyFp]| fs.iter().fold(vec![1u64], |acc, g| fp.poly_mul(&acc, g));
    let g0 = prod(&factors[..k]);
    let h0 = prod(&factors[k..]);
    let (one, s0, t0) = fp.ext_gcd(&g0, &h0);
    assert_eq!(one, vec![1], "Hensel factors must be coprime mod p");
    let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0), from_fp(&t0));
    let mut m = BigInt::from(fp.p);
    while &m < modulus {
        m = &m * &m;
        let fm = zmod(f, &m);
        let r = hensel_step(&fm, &g, &h, &s, &t, &m);
        g = r.0;
        h = r.1;
        s = r.2;
        t = r.3;
    }
    let g = zmod(&g, modulus);
    let h = zmod(&h, modulus);
    let mut out = multifactor_lift(&g, &factors[..k], fp, modulus);
    out.extend(multifactor_lift(&h, &factors[k..], fp, modulus));
    out
}

/// Coefficient bound for factors of `f` scaled by `lc(f)`.
fn factor_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + BigInt::one();
    let lc = f.last().unwrap().abs();
    lc * (BigInt::one() << n) * norm
}

/// Irreducible factors over Z of a squarefree primitive polynomial.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let f = zprimitive(f);
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let lc = f.last().unwrap().clone();

    // pick the prime with the fewest modular factors among a few candidates
    let mut best: Option<(Fp, Vec<PolyFp>)> = None;
    let mut tried = 0;
    for p in primes_from(3) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Fp::new(p);
        let fbar = to_fp(&fp, &f);
        if fbar.len() != f.len() || !fp.is_squarefree(&fbar) {
            continue;
        }
        let mon = fp.monic(&fbar);
        let count: usize = fp.distinct_degree(&mon).iter().map(|(g, d)| (g.len() - 1) / d).sum();
        if count == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|(_, fs)| count < fs.len()) {
            best = Some((fp, fp.factor_squarefree(&mon)));
        }
        tried += 1;
        if tried >= 8 {
            break;
        }
    }
    let (fp, modfactors) = best.expect("a lucky prime exists");
    let p = BigInt::from(fp.p);
    let bound = factor_bound(&f) * 2 + 1;
    let mut modulus = p.clone();
    while modulus <= bound {
        modulus *= &p;
    }
    let lc_inv = lc
        .extended_gcd(&modulus)
        .x
        .mod_floor(&modulus);
    let fmon = zmod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &modulus);
    let lifted = multifactor_lift(&fmon, &modfactors, &fp, &modulus);

    recombine(f, lifted, &modulus)
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        let lc = f.last().unwrap().clone();
        for subset in Combinations::new(lifted.len(), size) {
            // constant-term pretest
            let f0 = &f[0];
            if !f0.is_zero() {
                let c0 = subset
                    .iter()
                    .fold(lc.clone(), |acc, &i| (acc * &lifted[i][0]).mod_floor(modulus));
                let c0 = zsym(&[c0], modulus);
                let c0 = c0.first().cloned().unwrap_or_else(BigInt::zero);
                if c0.is_zero() || !(&lc * f0).is_multiple_of(&c0) {
                    continue;
                }
            }
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = zmod(&zmul(&g, &lifted[i]), modulus);
            }
            let g = zprimitive(&zsym(&g, modulus));
            if let Some(quo) = zdiv_exact(&f, &g) {
                hit = Some((subset, g, quo));
                break;
            }
        }
        match hit {
            Some((subset, g, quo)) => {
                found.push(g);
                f = zprimitive(&quo);
                let mut keep = Vec::new();
                for (i, h) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(h);
                    }
                }
                lifted = keep;
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        found.push(f);
    }
    found
}

/// Lexicographic k-subsets of 0..n.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Hensel-lifts the coprime factorization `f = prod parts (mod p)` of a
/// monic integer polynomial to modulus `p^k`. Each part must be monic mod p.
pub fn lift_coprime_factorization(f: &Poly, parts: &[PolyFp], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let fp = Fp::new(p);
    let modulus = BigInt::from(p).pow(k.max(1));
    let fz: ZPoly = f
        .coeffs()
        .iter()
        .map(|c| c.to_integer())
        .collect();
    multifactor_lift(&fz, parts, &fp, &modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn check(f: &Poly, expect: usize) -> Factorization {
        let fac = factor_over_q(f);
        assert_eq!(fac.expand(), *f, "factors of {} do not reassemble", f);
        assert_eq!(fac.factors.len(), expect, "wrong factor count for {}", f);
        for (g, _) in &fac.factors {
            // each factor must itself be irreducible modulo the recursion
            let again = factor_over_q(g);
            assert_eq!(again.factors.len(), 1);
        }
        fac
    }

    #[test]
    fn small_examples() {
        let fac = check(&Poly::from_ints(&[-2, 0, 1]), 1);
        assert_eq!(fac.factors[0].0, Poly::from_ints(&[-2, 0, 1]));
        let fac = check(&Poly::from_ints(&[-1, 0, 0, 0, 1]), 3);
        let fs: Vec<Poly> = fac.factors.iter().map(|f| f.0.clone()).collect();
        assert!(fs.contains(&Poly::from_ints(&[-1, 1])));
        assert!(fs.contains(&Poly::from_ints(&[1, 1])));
        assert!(fs.contains(&Poly::from_ints(&[1, 0, 1])));
        let fac = check(&Poly::from_ints(&[-4, 0, 0, 0, 0, 0, 1]), 2);
        let fs: Vec<Poly> = fac.factors.iter().map(|f| f.0.clone()).collect();
        assert!(fs.contains(&Poly::from_ints(&[-2, 0, 0, 1])));
        assert!(fs.contains(&Poly::from_ints(&[2, 0, 0, 1])));
    }

    #[test]
    fn swinnerton_dyer_like_polynomials() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        check(&Poly::from_ints(&[1, 0, -10, 0, 1]), 1);
        // product of its two shifts
        let f = Poly::from_ints(&[1, 0, -10, 0, 1]);
        let g = &f.shift(&q(1)) * &f.shift(&q(-2));
        check(&g, 2);
    }

    #[test]
    fn multiplicities_and_content() {
        let a = Poly::from_ints(&[1, 2]);
        let b = Poly::from_ints(&[3, 0, 1]);
        let f = (&(&a.pow(2) * &b) * &Poly::constant(q(-6))).scale(&crate::arith::qf(1, 5));
        let fac = factor_over_q(&f);
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.factors.iter().find(|x| x.0 == a).map(|x| x.1), Some(2));
    }

    #[test]
    fn cyclotomic_products() {
        // x^24 - 1 has one factor per divisor of 24
        let mut c = vec![0i64; 25];
        c[0] = -1;
        c[24] = 1;
        check(&Poly::from_ints(&c), 8);
    }
}
