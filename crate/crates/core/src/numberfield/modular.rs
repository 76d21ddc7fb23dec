//! Polynomial arithmetic and factorization over prime fields F_p, p < 2^64.
//!
//! Polynomials are `Vec<u64>` lowest degree first with no trailing zeros.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Q;

pub type PolyFp = Vec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero mod p");
        let r = BigInt::from(a).extended_gcd(&BigInt::from(self.p));
        let x = r.x.mod_floor(&BigInt::from(self.p));
        x.to_u64().unwrap()
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    /// Reduction of a rational whose denominator is prime to p.
    pub fn from_q(&self, a: &Q) -> Option<u64> {
        let d = self.from_bigint(a.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(a.numer()), self.inv(d)))
    }

    pub fn trim(&self, mut f: PolyFp) -> PolyFp {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn poly_add(&self, a: &[u64], b: &[u64]) -> PolyFp {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn poly_sub(&self, a: &[u64], b: &[u64]) -> PolyFp {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn poly_mul(&self, a: &[u64], b: &[u64]) -> PolyFp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    pub fn poly_scale(&self, a: &[u64], c: u64) -> PolyFp {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (PolyFp, PolyFp) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let inv = self.inv(*b.last().unwrap());
        let mut rem = a.to_vec();
        let mut quo = vec![0u64; a.len() - db];
        for i in (0..quo.len()).rev() {
            let c = self.mul(rem[i + db], inv);
            quo[i] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    rem[i + j] = self.sub(rem[i + j], self.mul(c, bj));
                }
            }
        }
        rem.truncate(db);
        (self.trim(quo), self.trim(rem))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> PolyFp {
        self.div_rem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> PolyFp {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> PolyFp {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (PolyFp, PolyFp, PolyFp) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (qt, r) = self.div_rem(&r0, &r1);
            let s = self.poly_sub(&s0, &self.poly_mul(&qt, &s1));
            let t = self.poly_sub(&t0, &self.poly_mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("gcd of zero polynomials"));
        (
            self.poly_scale(&r0, inv),
            self.poly_scale(&s0, inv),
            self.poly_scale(&t0, inv),
        )
    }

    pub fn derivative(&self, a: &[u64]) -> PolyFp {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(c, i as u64 % self.p))
                .collect(),
        )
    }

    /// `base^e mod m`
    pub fn pow_mod(&self, base: &[u64], e: &BigUint, m: &[u64]) -> PolyFp {
        let mut acc = self.rem(&[1], m);
        let base = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.poly_mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.poly_mul(&acc, &base), m);
            }
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self, a: &[u64]) -> PolyFp {
        let p = self.p as usize;
        self.trim(a.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition over F_p: monic `(g, e)` with `f = lc * prod g^e`.
    pub fn squarefree_decomposition(&self, f: &[u64]) -> Vec<(PolyFp, u32)> {
        let f = self.monic(f);
        let mut out = Vec::new();
        self.sqf_rec(&f, 1, &mut out);
        out.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
        // merge identical bases produced by the recursion
        let mut merged: Vec<(PolyFp, u32)> = Vec::new();
        for (g, e) in out {
            match merged.iter_mut().find(|(h, _)| *h == g) {
                Some(slot) => slot.1 += e,
                None => merged.push((g, e)),
            }
        }
        merged
    }

    fn sqf_rec(&self, f: &[u64], mult: u32, out: &mut Vec<(PolyFp, u32)>) {
        if f.len() <= 1 {
            return;
        }
        let df = self.derivative(f);
        if df.is_empty() {
            let r = self.pth_root(f);
            self.sqf_rec(&r, mult * self.p as u32, out);
            return;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.div_rem(f, &c).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let z = self.div_rem(&w, &y).0;
            if z.len() > 1 {
                out.push((self.monic(&z), i * mult));
            }
            i += 1;
            w = y;
            c = self.div_rem(&c, &w).0;
        }
        if c.len() > 1 {
            let r = self.pth_root(&c);
            self.sqf_rec(&r, mult * self.p as u32, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(PolyFp, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic(f);
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let pbig = BigUint::from(self.p);
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((f, deg));
                break;
            }
            h = self.pow_mod(&h, &pbig, &f);
            let g = self.gcd(&self.poly_sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Splits a product of distinct irreducibles all of degree `d`.
    fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyFp>) {
        let n = f.len() - 1;
        if n == d {
            out.push(self.monic(f));
            return;
        }
        loop {
            let a: PolyFp = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() <= 1 {
                continue;
            }
            let b = if self.p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..d {
                    t = self.rem(&self.poly_mul(&t, &t), f);
                    s = self.poly_add(&s, &t);
                }
                s
            } else {
                let e = (BigUint::from(self.p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
                let t = self.pow_mod(&a, &e, f);
                self.poly_sub(&t, &[1])
            };
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.div_rem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&h, d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors of a squarefree polynomial, sorted.
    pub fn factor_squarefree(&self, f: &[u64]) -> Vec<PolyFp> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.p);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, &mut rng, &mut out);
        }
        out.sort_by(|a, b| poly_order(a, b));
        out
    }

    /// Full factorization with multiplicities, factors monic and sorted.
    pub fn factor(&self, f: &[u64]) -> Vec<(PolyFp, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.squarefree_decomposition(f) {
            for h in self.factor_squarefree(&g) {
                match out.iter_mut().find(|(k, _): &&mut (PolyFp, u32)| *k == h) {
                    Some(slot) => slot.1 += e,
                    None => out.push((h, e)),
                }
            }
        }
        out.sort_by(|a, b| poly_order(&a.0, &b.0));
        out
    }

    pub fn is_squarefree(&self, f: &[u64]) -> bool {
        let df = self.derivative(f);
        !df.is_empty() && self.gcd(f, &df).len() == 1
    }
}

/// Deterministic ordering: by degree, then coefficients from the top down.
pub fn poly_order(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

pub fn is_zero_poly(a: &[u64]) -> bool {
    a.iter().all(|c| c.is_zero())
}
