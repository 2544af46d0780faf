use super::{CycloScalar, Rational};
use crate::error::{Error, Result};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of `Q(ζ_N)[ε, ε⁻¹]`: a Laurent polynomial in ε with cyclotomic
/// coefficients. Finite support, no stored zero coefficients.
#[derive(Clone)]
pub struct LaurentScalar {
    order: u32,
    terms: BTreeMap<i64, CycloScalar>,
}

impl PartialEq for LaurentScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.terms == other.terms;
        }
        let n = num::integer::lcm(self.order, other.order);
        self.embed(n).unwrap().terms == other.embed(n).unwrap().terms
    }
}

impl Eq for LaurentScalar {}

impl LaurentScalar {
    pub fn zero(order: u32) -> Self {
        LaurentScalar {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_cyclo(CycloScalar::one(order))
    }

    pub fn from_cyclo(c: CycloScalar) -> Self {
        let order = c.order();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        LaurentScalar { order, terms }
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        Self::from_cyclo(CycloScalar::from_rational(order, q))
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_cyclo(CycloScalar::from_int(order, n))
    }

    /// c · ε^k
    pub fn monomial(c: CycloScalar, k: i64) -> Self {
        let order = c.order();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentScalar { order, terms }
    }

    /// ε^k
    pub fn eps_pow(order: u32, k: i64) -> Self {
        Self::monomial(CycloScalar::one(order), k)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloScalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn from_terms(order: u32, it: impl IntoIterator<Item = (i64, CycloScalar)>) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in it {
            s.add_term(k, &c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, c: &CycloScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(k)
            .or_insert_with(|| CycloScalar::zero(self.order));
        let c = if c.order() == self.order {
            c.clone()
        } else {
            c.embed(self.order).expect("order mismatch in add_term")
        };
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Smallest ε-exponent with nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of ε^k.
    pub fn coeff(&self, k: i64) -> CycloScalar {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| CycloScalar::zero(self.order))
    }

    /// The ε→0 limit; errors when a pole is present.
    pub fn limit(&self) -> Result<CycloScalar> {
        match self.min_exponent() {
            Some(m) if m < 0 => Err(Error::DivergentLimit {
                monomial: vec![],
                min_exponent: m,
            }),
            _ => Ok(self.coeff(0)),
        }
    }

    /// True iff the element is ε-free (lives in Q(ζ_N)).
    pub fn is_eps_free(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    pub fn as_cyclo(&self) -> Option<CycloScalar> {
        if self.is_eps_free() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// ε ↦ ε^k on every term.
    pub fn substitute_eps_power(&self, k: i64) -> Self {
        assert!(k >= 1);
        LaurentScalar {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn embed(&self, new_order: u32) -> Result<Self> {
        if new_order == self.order {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(*k, c.embed(new_order)?);
        }
        Ok(LaurentScalar {
            order: new_order,
            terms,
        })
    }

    pub fn scale_rat(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.order);
        }
        LaurentScalar {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale(q))).collect(),
        }
    }

    /// Inverse of a single-term (monomial) Laurent scalar.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        c.inverse().map(|ci| Self::monomial(ci, -k))
    }

    /// Truncated inverse of a unit power series: requires min exponent 0 and
    /// an invertible constant term; result satisfies `self * inv ≡ 1 mod ε^cut`.
    pub fn inverse_series(&self, cut: i64) -> Option<Self> {
        let m = self.min_exponent()?;
        if m != 0 {
            return None;
        }
        let c0 = self.coeff(0).inverse()?;
        let mut inv = Self::from_cyclo(c0.clone());
        // Newton-free direct recursion: coefficients of the inverse one at a time.
        for k in 1..cut {
            // coefficient of eps^k in self*inv so far, then correct it
            let mut acc = CycloScalar::zero(self.order);
            for (j, cj) in &self.terms {
                if *j >= 1 && *j <= k {
                    let other = inv.coeff(k - j);
                    if !other.is_zero() {
                        acc = &acc + &(cj * &other);
                    }
                }
            }
            let corr = &(-&acc) * &c0;
            inv.add_term(k, &corr);
        }
        Some(inv)
    }

    /// Truncation: drop all terms with exponent >= cut.
    pub fn truncate(&self, cut: i64) -> Self {
        LaurentScalar {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| **k < cut)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }
}

fn common(a: &LaurentScalar, b: &LaurentScalar) -> (LaurentScalar, LaurentScalar) {
    if a.order == b.order {
        (a.clone(), b.clone())
    } else {
        let n = num::integer::lcm(a.order, b.order);
        (a.embed(n).unwrap(), b.embed(n).unwrap())
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let (a, b) = common(self, rhs);
        let mut out = a;
        for (k, c) in &b.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let (a, b) = common(self, rhs);
        let mut out = LaurentScalar::zero(a.order);
        for (j, cj) in &a.terms {
            for (k, ck) in &b.terms {
                out.add_term(j + k, &(cj * ck));
            }
        }
        out
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*e", c)?,
                _ => write!(f, "({})*e^{}", c, k)?,
            }
        }
        Ok(())
    }
}
