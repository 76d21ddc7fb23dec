//! Certified complex root isolation for polynomials with rational
//! coefficients.
//!
//! Roots are approximated with Aberth iteration in f64, polished by Newton
//! steps in fixed-point arithmetic at the configured precision, and then
//! certified: each center `z` gets the radius `n |p(z)| / |p'(z)|`, which
//! always encloses a root, and the enclosing disks are checked pairwise
//! disjoint, so each holds exactly one root.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use crate::arith::{ln_q, Q};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// Precision in bits, honoring the `HEIGHTLAB_PRECISION` override.
pub fn configured_precision() -> u32 {
    std::env::var("HEIGHTLAB_PRECISION")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&b| (64..=1 << 16).contains(&b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// An exact Gaussian rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        GaussQ::real(Q::zero())
    }

    pub fn add(&self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &GaussQ) -> GaussQ {
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &GaussQ) -> GaussQ {
        let n = o.norm_sqr();
        GaussQ::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
        )
    }

    pub fn conj(&self) -> GaussQ {
        GaussQ::new(self.re.clone(), -self.im.clone())
    }

    pub fn abs_f64(&self) -> f64 {
        let n = self.norm_sqr();
        if n.is_zero() {
            return 0.0;
        }
        match n.to_f64() {
            Some(x) if x.is_normal() => x.sqrt(),
            _ => (0.5 * ln_q(&n)).exp(),
        }
    }

    /// `ln |z|`; the caller guarantees z != 0.
    pub fn ln_abs(&self) -> f64 {
        0.5 * ln_q(&self.norm_sqr())
    }


    pub fn to_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_zero() {
            0.0
        } else {
            let s = if x.is_negative() { -1.0 } else { 1.0 };
            s * ln_q(&x.abs()).exp()
        }
    })
}


/// Horner evaluation of a rational polynomial at a Gaussian rational.
pub fn eval_poly(p: &[Q], z: &GaussQ) -> GaussQ {
    let mut acc = GaussQ::zero();
    for c in p.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Smallest rational upper bound of sqrt(x) on a 2^-bits grid.
/// Complex fixed-point value `(re + i im) / 2^bits`.
struct Fixed {
    re: BigInt,
    im: BigInt,
}

fn fixed_mul(a: &Fixed, b: &Fixed, bits: u32) -> Fixed {
    Fixed {
        re: (&a.re * &b.re - &a.im * &b.im) >> bits,
        im: (&a.re * &b.im + &a.im * &b.re) >> bits,
    }
}

/// Approximate `p(z)` and `p'(z)` in fixed point, for Newton steps only.
fn fixed_horner(c: &[BigInt], z: &Fixed, bits: u32) -> (Fixed, Fixed) {
    let mut p = Fixed { re: BigInt::zero(), im: BigInt::zero() };
    let mut d = Fixed { re: BigInt::zero(), im: BigInt::zero() };
    for ci in c.iter().rev() {
        d = fixed_mul(&d, z, bits);
        d.re += &p.re;
        d.im += &p.im;
        p = fixed_mul(&p, z, bits);
        p.re += ci << bits;
    }
    (p, d)
}

/// Exact `2^(deg bits) c(z)` for `z` in fixed point.
fn homogeneous_eval(c: &[BigInt], z: &Fixed, bits: u32) -> Fixed {
    let n = c.len() - 1;
    let mut acc = Fixed { re: c[n].clone(), im: BigInt::zero() };
    for (k, ck) in c.iter().enumerate().take(n).rev() {
        acc = Fixed {
            re: &acc.re * &z.re - &acc.im * &z.im,
            im: &acc.re * &z.im + &acc.im * &z.re,
        };
        acc.re += ck << (bits as usize * (n - k));
    }
    acc
}

fn sqrt_upper(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << (2 * bits);
    let scaled = (x * Q::from_integer(scale)).ceil().to_integer();
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    Q::new(r, BigInt::one() << bits)
}

/// A certified root: exactly one root of the polynomial lies in the closed
/// disk of radius `radius` around `center`. Real roots have a real center.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub center: GaussQ,
    pub radius: Q,
    pub is_real: bool,
}

impl IsolatedRoot {
    pub fn radius_f64(&self) -> f64 {
        q_to_f64(&self.radius) * (1.0 + 1e-12)
    }

    pub fn conj(&self) -> IsolatedRoot {
        IsolatedRoot {
            center: self.center.conj(),
            radius: self.radius.clone(),
            is_real: self.is_real,
        }
    }

    pub fn contains(&self, z: &GaussQ, slack: &Q) -> bool {
        let r = &self.radius + slack;
        self.center.sub(z).norm_sqr() <= &r * &r
    }

    /// Value of a rational polynomial at the root, as an exact value at the
    /// center plus an upper bound on the distance to the true value.
    pub fn eval(&self, coeffs: &[Q]) -> (GaussQ, f64) {
        let v = eval_poly(coeffs, &self.center);
        let r = self.radius_f64();
        let m = self.center.abs_f64() + r;
        let mut deriv_bound = 0.0f64;
        for (i, c) in coeffs.iter().enumerate().skip(1) {
            deriv_bound += i as f64 * q_to_f64(&c.abs()) * m.powi(i as i32 - 1);
        }
        (v, r * deriv_bound * (1.0 + 1e-9))
    }
}

/// `ln |a(root)|` with a rigorous absolute error bound. Fails when the
/// enclosure cannot separate the value from zero.
pub fn ln_abs_at(root: &IsolatedRoot, coeffs: &[Q], bits: u32) -> Result<(f64, f64)> {
    let (v, delta) = root.eval(coeffs);
    let mag = v.abs_f64();
    if !(mag > 2.0 * delta) || mag == 0.0 {
        return Err(Error::PrecisionExhausted { bits });
    }
    let ln = v.ln_abs();
    let err = delta / (mag - delta) + 1e-14 * (1.0 + ln.abs());
    Ok((ln, err))
}

fn aberth_f64(coeffs: &[f64]) -> Option<Vec<(f64, f64)>> {
    use num_complex::Complex64 as C;
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let a: Vec<C> = coeffs.iter().map(|&c| C::new(c / lc, 0.0)).collect();
    // Cauchy bound
    let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let low = {
        // lower bound on root moduli from the reversed polynomial
        let a0 = a[0].norm();
        if a0 == 0.0 {
            0.0
        } else {
            a0 / (a0 + a[1..].iter().map(|c| c.norm()).fold(0.0, f64::max))
        }
    };
    let rad = (bound * low.max(1e-12)).sqrt().clamp(low.max(1e-6), bound);
    let mut z: Vec<C> = (0..n)
        .map(|k| C::from_polar(rad, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let eval = |x: C| -> (C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += C::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            return Some(z.iter().map(|c| (c.re, c.im)).collect());
        }
    }
    Some(z.iter().map(|c| (c.re, c.im)).collect())
}

/// Isolates all complex roots of a squarefree polynomial.
///
/// Output order: real roots ascending, then roots in the upper half plane
/// sorted by real part, then their conjugates in the same order.
pub fn isolate_roots(p: &Poly, bits: u32) -> Result<Vec<IsolatedRoot>> {
    let n = p.deg();
    let fail = Error::PrecisionExhausted { bits };
    if n == 0 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<Q> = p.monic().into_coeffs();
    if n == 1 {
        return Ok(vec![IsolatedRoot {
            center: GaussQ::real(-coeffs[0].clone()),
            radius: Q::zero(),
            is_real: true,
        }]);
    }
    let cf: Vec<f64> = coeffs.iter().map(q_to_f64).collect();
    if cf.iter().any(|c| !c.is_finite()) {
        return Err(fail);
    }
    let approx = aberth_f64(&cf).ok_or(fail.clone())?;
    let ints = p.primitive_integer().1;
    let dints: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect();
    let one = Q::from_integer(BigInt::one() << bits);

    let mut certified: Vec<IsolatedRoot> = Vec::with_capacity(n);
    for (re, im) in approx {
        let to_fixed = |x: f64| -> Result<BigInt> {
            Ok((Q::from_float(x).ok_or(fail.clone())? * &one).round().to_integer())
        };
        let mut z = Fixed { re: to_fixed(re)?, im: to_fixed(im)? };
        for _ in 0..24 {
            let (pv, dv) = fixed_horner(&ints, &z, bits);
            let den = &dv.re * &dv.re + &dv.im * &dv.im;
            if den.is_zero() {
                return Err(fail);
            }
            let sre = ((&pv.re * &dv.re + &pv.im * &dv.im) << bits) / &den;
            let sim = ((&pv.im * &dv.re - &pv.re * &dv.im) << bits) / &den;
            z.re -= &sre;
            z.im -= &sim;
            if sre.magnitude().bits() <= 3 && sim.magnitude().bits() <= 3 {
                break;
            }
        }
        // exact residual: P = 2^(n bits) p(z), P' = 2^((n-1) bits) p'(z)
        let pz = homogeneous_eval(&ints, &z, bits);
        let dz = homogeneous_eval(&dints, &z, bits);
        let dnorm = &dz.re * &dz.re + &dz.im * &dz.im;
        if dnorm.is_zero() {
            return Err(fail);
        }
        let num = BigInt::from(n * n) * (&pz.re * &pz.re + &pz.im * &pz.im);
        let r2 = Q::new(num, dnorm << (2 * bits));
        let radius = sqrt_upper(&r2, bits + 8);
        let center = GaussQ::new(Q::new(z.re, BigInt::one() << bits), Q::new(z.im, BigInt::one() << bits));
        certified.push(IsolatedRoot { center, radius, is_real: false });
    }
    if !pairwise_disjoint(&certified) {
        return Err(fail);
    }

    // classify: a disk meeting the real axis whose mirror image meets no
    // other disk holds a real root
    let mut reals = Vec::new();
    let mut uppers = Vec::new();
    for (i, r) in certified.iter().enumerate() {
        if r.center.im.abs() <= r.radius {
            let mirror = r.conj();
            let lonely = certified
                .iter()
                .enumerate()
                .all(|(j, o)| j == i || !disks_meet(&mirror, o));
            if !lonely {
                return Err(fail);
            }
            let radius = &r.radius + r.center.im.abs();
            reals.push(IsolatedRoot {
                center: GaussQ::real(r.center.re.clone()),
                radius,
                is_real: true,
            });
        } else if r.center.im.is_positive() {
            uppers.push(r.clone());
        }
    }
    if reals.len() + 2 * uppers.len() != n {
        return Err(fail);
    }
    reals.sort_by(|a, b| a.center.re.cmp(&b.center.re));
    uppers.sort_by(|a, b| a.center.re.cmp(&b.center.re).then(a.center.im.cmp(&b.center.im)));
    let mut out = reals;
    let lowers: Vec<IsolatedRoot> = uppers.iter().map(IsolatedRoot::conj).collect();
    out.extend(uppers);
    out.extend(lowers);
    if !pairwise_disjoint(&out) {
        return Err(fail);
    }
    Ok(out)
}

fn disks_meet(a: &IsolatedRoot, b: &IsolatedRoot) -> bool {
    let d2 = a.center.sub(&b.center).norm_sqr();
    let r = &a.radius + &b.radius;
    d2 <= &r * &r
}

fn pairwise_disjoint(rs: &[IsolatedRoot]) -> bool {
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if disks_meet(&rs[i], &rs[j]) {
                return false;
            }
        }
    }
    true
}

/// Index of the unique isolating disk that contains the enclosure
/// `(value, err)`, if exactly one does.
pub fn match_root(roots: &[IsolatedRoot], value: &GaussQ, err: f64) -> Option<usize> {
    let slack = Q::from_float(err * (1.0 + 1e-9)).unwrap_or_else(Q::zero);
    let hits: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contains(value, &slack))
        .map(|(i, _)| i)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}
