use super::{LaurentScalar, Rational};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn nvars_used(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut e = vec![0u32; n];
        for (i, x) in self.0.iter().enumerate() {
            e[i] += x;
        }
        for (i, x) in other.0.iter().enumerate() {
            e[i] += x;
        }
        Monomial::new(e)
    }
}

/// Degree of a polynomial; the zero polynomial is homogeneous of every degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Degree {
    Any,
    Of(usize),
}

/// Sparse multivariate polynomial over `Q(ζ_N)[ε, ε⁻¹]`.
///
/// Equality is mathematical: the declared variable count and cyclotomic
/// order are not part of the comparison.
#[derive(Clone)]
pub struct Poly {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Monomial, LaurentScalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(other.terms.iter())
            .all(|((m1, c1), (m2, c2))| m1 == m2 && c1 == c2)
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(order: u32, nvars: usize) -> Self {
        Poly {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: LaurentScalar) -> Self {
        let order = c.order();
        let mut p = Poly::zero(order, nvars);
        p.add_term(Monomial::one(), &c);
        p
    }

    pub fn one(order: u32, nvars: usize) -> Self {
        Self::constant(nvars, LaurentScalar::one(order))
    }

    pub fn var(order: u32, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Poly::zero(order, nvars);
        p.add_term(Monomial::var(i), &LaurentScalar::one(order));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> LaurentScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| LaurentScalar::zero(self.order))
    }

    pub fn add_term(&mut self, m: Monomial, c: &LaurentScalar) {
        assert!(m.nvars_used() <= self.nvars, "monomial exceeds nvars");
        if c.is_zero() {
            return;
        }
        let c = if c.order() == self.order {
            c.clone()
        } else {
            c.embed(self.order).expect("order embed failed")
        };
        let entry = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| LaurentScalar::zero(self.order));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn from_terms(
        order: u32,
        nvars: usize,
        it: impl IntoIterator<Item = (Monomial, LaurentScalar)>,
    ) -> Self {
        let mut p = Poly::zero(order, nvars);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = common(self, other);
        let mut out = a;
        for (m, c) in &b.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = common(self, other);
        let mut out = Poly::zero(a.order, a.nvars);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    /// Product with all ε-exponents at or above `cut` dropped after each step.
    pub fn mul_truncated(&self, other: &Poly, cut: i64) -> Poly {
        let (a, b) = common(self, other);
        let mut out = Poly::zero(a.order, a.nvars);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                out.add_term(m1.mul(m2), &(c1 * c2).truncate(cut));
            }
        }
        out.truncate_eps(cut)
    }

    pub fn truncate_eps(&self, cut: i64) -> Poly {
        let mut out = Poly::zero(self.order, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.truncate(cut));
        }
        out
    }

    pub fn scale(&self, s: &LaurentScalar) -> Poly {
        let mut out = Poly::zero(self.order.max(s.order()), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn scale_rat(&self, q: &Rational) -> Poly {
        let mut out = Poly::zero(self.order, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.scale_rat(q));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.order, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn embed(&self, new_order: u32) -> Result<Poly> {
        if new_order == self.order {
            return Ok(self.clone());
        }
        let mut out = Poly::zero(new_order, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.embed(new_order)?);
        }
        Ok(out)
    }

    pub fn with_nvars(&self, nvars: usize) -> Poly {
        assert!(self.terms.keys().all(|m| m.nvars_used() <= nvars));
        Poly {
            nvars,
            order: self.order,
            terms: self.terms.clone(),
        }
    }

    /// Degree of the polynomial; `Degree::Any` for zero.
    pub fn degree(&self) -> Degree {
        match self.terms.keys().map(|m| m.degree()).max() {
            None => Degree::Any,
            Some(d) => Degree::Of(d),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    /// Homogeneous degree-k component.
    pub fn homogeneous_part(&self, k: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// The polynomial of ε-exponent-0 coefficients; errors if any coefficient
    /// has a pole at ε = 0.
    pub fn limit(&self) -> Result<Poly> {
        let mut out = Poly::zero(self.order, self.nvars);
        for (m, c) in &self.terms {
            if let Some(e) = c.min_exponent() {
                if e < 0 {
                    return Err(Error::DivergentLimit {
                        monomial: m.exponents().to_vec(),
                        min_exponent: e,
                    });
                }
            }
            out.add_term(m.clone(), &LaurentScalar::from_cyclo(c.coeff(0)));
        }
        Ok(out)
    }

    /// Smallest ε-exponent over all coefficients; None for the zero polynomial.
    pub fn min_eps_order(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| c.min_exponent()).min()
    }

    /// Coefficient-wise extraction of the ε^k layer (an ε-free polynomial).
    pub fn eps_coefficient(&self, k: i64) -> Poly {
        let mut out = Poly::zero(self.order, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &LaurentScalar::from_cyclo(c.coeff(k)));
        }
        out
    }

    pub fn is_eps_free(&self) -> bool {
        self.terms.values().all(|c| c.is_eps_free())
    }

    /// true iff `limit(self)` and `limit(other)` both exist and are equal.
    pub fn equiv_mod_eps(&self, other: &Poly) -> bool {
        match (self.limit(), other.limit()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Exact homogeneous linear substitution: variable i ↦ map[i].
    pub fn substitute_linear(&self, map: &[LinearForm]) -> Result<Poly> {
        if map.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: map.len(),
            });
        }
        let out_nvars = map.iter().map(|f| f.nvars()).max().unwrap_or(0);
        let mut order = self.order;
        for f in map {
            for c in &f.coeffs {
                order = num::integer::lcm(order, c.order());
            }
        }
        let mut out = Poly::zero(order, out_nvars);
        // Cache powers of each substituted form.
        let mut powers: Vec<Vec<Poly>> = map
            .iter()
            .map(|f| vec![Poly::one(order, out_nvars), f.to_poly_n(order, out_nvars)])
            .collect();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(out_nvars, c.embed(order).unwrap());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let last = powers[i].last().unwrap().clone();
                    let next = last.mul(&powers[i][1]);
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e as usize]);
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// ε ↦ ε^k in every coefficient.
    pub fn substitute_eps_power(&self, k: i64) -> Poly {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.substitute_eps_power(k)))
                .collect(),
        }
    }

    /// Partial derivative with respect to variable i.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.order, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(
                Monomial::new(exps),
                &c.scale_rat(&Rational::from(num::BigInt::from(e as i64))),
            );
        }
        out
    }

    /// Substitute a constant for one variable (used by interpolation slices).
    pub fn substitute_const(&self, i: usize, value: &LaurentScalar) -> Poly {
        let mut out = Poly::zero(self.order.max(value.order()), self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            let mut exps = m.exponents().to_vec();
            if i < exps.len() {
                exps[i] = 0;
            }
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff = &coeff * value;
            }
            out.add_term(Monomial::new(exps), &coeff);
        }
        out
    }
}

fn common(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let nvars = a.nvars.max(b.nvars);
    let order = num::integer::lcm(a.order, b.order);
    let mut a2 = a.embed(order).unwrap();
    a2.nvars = nvars;
    let mut b2 = b.embed(order).unwrap();
    b2.nvars = nvars;
    (a2, b2)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}]", c)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i)?,
                    _ => write!(f, "*x{}^{}", i, e)?,
                }
            }
        }
        Ok(())
    }
}

/// A homogeneous degree-1 polynomial, one coefficient per variable.
#[derive(Clone, Debug)]
pub struct LinearForm {
    coeffs: Vec<LaurentScalar>,
}

impl PartialEq for LinearForm {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl Eq for LinearForm {}

impl LinearForm {
    pub fn new(coeffs: Vec<LaurentScalar>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(order: u32, nvars: usize) -> Self {
        LinearForm {
            coeffs: vec![LaurentScalar::zero(order); nvars],
        }
    }

    /// The single variable x_i as a form in `nvars` variables.
    pub fn var(order: u32, nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(order, nvars);
        f.coeffs[i] = LaurentScalar::one(order);
        f
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[LaurentScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> LaurentScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| LaurentScalar::zero(self.order()))
    }

    pub fn order(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.order())
            .fold(1, num::integer::lcm)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_eps_free(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_eps_free())
    }

    pub fn to_poly(&self) -> Poly {
        let order = self.order();
        self.to_poly_n(order, self.coeffs.len())
    }

    pub fn to_poly_n(&self, order: u32, nvars: usize) -> Poly {
        let mut p = Poly::zero(order, nvars.max(self.coeffs.len()));
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i), &c.embed(order).unwrap());
        }
        p
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        LinearForm { coeffs: out }
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &LaurentScalar) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn substitute_eps_power(&self, k: i64) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.substitute_eps_power(k))
                .collect(),
        }
    }

    pub fn embed(&self, order: u32) -> Result<LinearForm> {
        Ok(LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.embed(order))
                .collect::<Result<_>>()?,
        })
    }

    /// Smallest ε-order over all coefficients; None for the zero form.
    pub fn min_eps_order(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.min_exponent()).min()
    }

    /// The coefficient vector of ε^k (an ε-free form).
    pub fn eps_coefficient(&self, k: i64) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| LaurentScalar::from_cyclo(c.coeff(k)))
                .collect(),
        }
    }

    /// Lowest-order coefficient vector: the ε^q layer where q = min order.
    pub fn lowest_order_form(&self) -> Option<(i64, LinearForm)> {
        let q = self.min_eps_order()?;
        Some((q, self.eps_coefficient(q)))
    }
}

/// Proportionality test over Q(ζ_N) via 2×2 minors; both forms ε-free.
pub fn proportional(a: &LinearForm, b: &LinearForm) -> bool {
    let n = a.nvars().max(b.nvars());
    for i in 0..n {
        for j in (i + 1)..n {
            let m = &(&a.coeff(i) * &b.coeff(j)) - &(&a.coeff(j) * &b.coeff(i));
            if !m.is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat_int, CycloScalar};

    fn x(i: usize, n: usize) -> Poly {
        Poly::var(1, n, i)
    }

    #[test]
    fn limit_examples() {
        // x*(1+eps) -> x
        let p = x(0, 1).scale(&(&LaurentScalar::one(1) + &LaurentScalar::eps_pow(1, 1)));
        assert_eq!(p.limit().unwrap(), x(0, 1));
        // eps^-1 * x -> divergent
        let q = x(0, 1).scale(&LaurentScalar::eps_pow(1, -1));
        assert!(q.limit().is_err());
        // eps^-1((1+eps x)(1+eps y) - 1 - eps^2 xy) = x + y
        let one = Poly::one(1, 2);
        let ex = x(0, 2).scale(&LaurentScalar::eps_pow(1, 1));
        let ey = x(1, 2).scale(&LaurentScalar::eps_pow(1, 1));
        let prod = one.add(&ex).mul(&one.add(&ey));
        let xy = x(0, 2).mul(&x(1, 2)).scale(&LaurentScalar::eps_pow(1, 2));
        let num = prod.sub(&one).sub(&xy);
        let p = num.scale(&LaurentScalar::eps_pow(1, -1));
        assert_eq!(p.limit().unwrap(), x(0, 2).add(&x(1, 2)));
    }

    #[test]
    fn equiv_mod_eps_examples() {
        let p = x(0, 2).add(&x(1, 2).scale(&LaurentScalar::eps_pow(1, 1)));
        assert!(p.equiv_mod_eps(&x(0, 2)));
        let d = x(0, 1).scale(&LaurentScalar::eps_pow(1, -1));
        assert!(!d.equiv_mod_eps(&d.clone()));
        // eps^-2((1-eps x)(1+eps x) - 1) = -x^2
        let one = Poly::one(1, 1);
        let ex = x(0, 1).scale(&LaurentScalar::eps_pow(1, 1));
        let p = one.sub(&ex).mul(&one.add(&ex)).sub(&one).scale(&LaurentScalar::eps_pow(1, -2));
        assert!(p.equiv_mod_eps(&x(0, 1).mul(&x(0, 1)).neg()));
    }

    #[test]
    fn substitute_linear_examples() {
        // p = x1 x2, map (x2, x1) -> x1 x2
        let p = x(0, 2).mul(&x(1, 2));
        let map = vec![LinearForm::var(1, 2, 1), LinearForm::var(1, 2, 0)];
        assert_eq!(p.substitute_linear(&map).unwrap(), p);
        // p = x1^2, map x1 -> x1 + x2
        let p = x(0, 1).pow(2);
        let f = LinearForm::new(vec![LaurentScalar::one(1), LaurentScalar::one(1)]);
        let r = p.substitute_linear(&[f]).unwrap();
        let expect = x(0, 2)
            .pow(2)
            .add(&x(0, 2).mul(&x(1, 2)).scale_rat(&rat_int(2)))
            .add(&x(1, 2).pow(2));
        assert_eq!(r, expect);
        // p = x1^3 + x2^3, map (x1, zeta3 x1) -> 2 x1^3
        let p = x(0, 2).pow(3).add(&x(1, 2).pow(3));
        let z3 = LaurentScalar::from_cyclo(CycloScalar::primitive_root(3, 3).unwrap());
        let map = vec![
            LinearForm::var(3, 1, 0),
            LinearForm::new(vec![z3]),
        ];
        let r = p.substitute_linear(&map).unwrap();
        let expect = Poly::var(3, 1, 0).pow(3).scale_rat(&rat_int(2));
        assert_eq!(r, expect);
    }

    #[test]
    fn limit_multiplicative() {
        let one = Poly::one(1, 2);
        let p = x(0, 2).add(&x(1, 2).scale(&LaurentScalar::eps_pow(1, 3)));
        let q = one.add(&x(0, 2).scale(&LaurentScalar::eps_pow(1, 1)));
        let lhs = p.mul(&q).limit().unwrap();
        let rhs = p.limit().unwrap().mul(&q.limit().unwrap());
        assert_eq!(lhs, rhs);
    }
}
