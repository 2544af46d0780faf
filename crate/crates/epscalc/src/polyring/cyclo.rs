use super::Rational;
use crate::error::{Error, Result};
use num::{BigInt, One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

/// Integer coefficients of the N-th cyclotomic polynomial, low degree first.
///
/// Computed as `(x^N - 1) / prod_{d | N, d < N} Phi_d` by exact division and
/// memoized process-wide (a cache of a pure function).
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let result = compute_cyclotomic(n);
    cache.lock().unwrap().insert(n, result.clone());
    result
}

fn compute_cyclotomic(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_exact_div(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials, panics on nonzero remainder.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let v = rem[i - dd + j].clone() - &c * dc;
            rem[i - dd + j] = v;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

fn phi_degree(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// An element of `Q(ζ_N) = Q[t]/Φ_N(t)`, stored on the power basis
/// `1, t, …, t^{φ(N)-1}` with `t ↦ ζ_N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    order: u32,
    coords: Vec<Rational>,
}

impl CycloScalar {
    pub fn zero(order: u32) -> Self {
        CycloScalar {
            order,
            coords: vec![Rational::zero(); phi_degree(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coords[0] = q;
        s
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, Rational::from(BigInt::from(n)))
    }

    /// ζ_N^k as an element of Q(ζ_N).
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let n = order as i64;
        let k = k.rem_euclid(n) as usize;
        let deg = phi_degree(order);
        let mut raw = vec![Rational::zero(); k + 1];
        raw[k] = Rational::one();
        let coords = reduce_mod_phi(raw, order, deg);
        CycloScalar { order, coords }
    }

    /// A primitive d-th root of unity inside Q(ζ_N); requires `d | N`.
    pub fn primitive_root(order: u32, d: u32) -> Result<Self> {
        if d == 0 || order % d != 0 {
            return Err(Error::CyclotomicOrderMismatch(order, d));
        }
        Ok(Self::zeta_pow(order, (order / d) as i64))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn from_coords(order: u32, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != phi_degree(order) {
            return Err(Error::Json(format!(
                "cyclotomic coordinate count {} != phi({}) = {}",
                coords.len(),
                order,
                phi_degree(order)
            )));
        }
        Ok(CycloScalar { order, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Returns the rational part if the element lies in Q, otherwise None.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Re-embed into Q(ζ_M) for N | M via ζ_N = ζ_M^{M/N}.
    pub fn embed(&self, new_order: u32) -> Result<Self> {
        if new_order == self.order {
            return Ok(self.clone());
        }
        if new_order % self.order != 0 {
            return Err(Error::CyclotomicOrderMismatch(self.order, new_order));
        }
        let step = (new_order / self.order) as i64;
        let mut acc = CycloScalar::zero(new_order);
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                let term = CycloScalar::zeta_pow(new_order, step * k as i64).scale(c);
                acc = &acc + &term;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloScalar {
            order: self.order,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[t]
    /// modulo Φ_N (which is irreducible over Q, so Q(ζ_N) is a field).
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(self.order, q.recip()));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from)
            .collect();
        let (g, _, t) = ext_gcd(&phi, &self.coords);
        // g must be a nonzero constant.
        assert_eq!(poly_deg(&g), Some(0), "cyclotomic polynomial not coprime");
        let ginv = g[0].recip();
        let inv: Vec<Rational> = t.iter().map(|c| c * &ginv).collect();
        let deg = phi_degree(self.order);
        Some(CycloScalar {
            order: self.order,
            coords: reduce_mod_phi(inv, self.order, deg),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn poly_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Extended gcd over Q[x]: returns (g, s, t) with s*a + t*b = g.
fn ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let zero = || vec![Rational::zero()];
    let one = || vec![Rational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let ns = poly_sub(&s0, &poly_mul_q(&q, &s1));
        let nt = poly_sub(&t0, &poly_mul_q(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    (r0, s0, t0)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let mut quot = vec![Rational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &b[db];
        quot[dr - db] = c.clone();
        for j in 0..=db {
            let v = rem[dr - db + j].clone() - &c * &b[j];
            rem[dr - db + j] = v;
        }
    }
    (quot, rem)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    out
}

fn poly_mul_q(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![Rational::zero()];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

fn reduce_mod_phi(mut raw: Vec<Rational>, order: u32, deg: usize) -> Vec<Rational> {
    let phi: Vec<Rational> = cyclotomic_polynomial(order)
        .into_iter()
        .map(Rational::from)
        .collect();
    let dphi = phi.len() - 1;
    for i in (dphi..raw.len()).rev() {
        let c = raw[i].clone();
        if c.is_zero() {
            continue;
        }
        raw[i] = Rational::zero();
        for j in 0..dphi {
            let v = raw[i - dphi + j].clone() - &c * &phi[j];
            raw[i - dphi + j] = v;
        }
    }
    raw.truncate(deg);
    raw.resize(deg, Rational::zero());
    raw
}

fn common_order(a: &CycloScalar, b: &CycloScalar) -> (CycloScalar, CycloScalar) {
    if a.order == b.order {
        (a.clone(), b.clone())
    } else {
        let n = num::integer::lcm(a.order, b.order);
        (a.embed(n).unwrap(), b.embed(n).unwrap())
    }
}

impl Add for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = common_order(self, rhs);
        CycloScalar {
            order: a.order,
            coords: a
                .coords
                .iter()
                .zip(b.coords.iter())
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = common_order(self, rhs);
        CycloScalar {
            order: a.order,
            coords: a
                .coords
                .iter()
                .zip(b.coords.iter())
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

impl Mul for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = common_order(self, rhs);
        let deg = a.coords.len();
        let raw = poly_mul_q(&a.coords, &b.coords);
        CycloScalar {
            order: a.order,
            coords: reduce_mod_phi(raw, a.order, deg),
        }
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", c)?;
            } else if k == 1 {
                write!(f, "{}*z{}", c, self.order)?;
            } else {
                write!(f, "{}*z{}^{}", c, self.order, k)?;
            }
        }
        Ok(())
    }
}
