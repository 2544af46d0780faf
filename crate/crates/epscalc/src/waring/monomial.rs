use super::types::WaringDecomposition;
use crate::error::Result;
use crate::polyring::{CycloScalar, LaurentScalar, LinearForm, Rational};
use num::BigInt;

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k.min(n - k) {
        r = r * BigInt::from((n - i) as i64) / BigInt::from((i + 1) as i64);
    }
    r
}

/// Exact Waring decomposition of the binary monomial `y1^a y2^b` with
/// max(a,b)+1 summands:
/// `u^A v^B = (1/((A+1) C(A+B, A))) sum_{k=0}^{A} zeta^k (zeta^k u + v)^{A+B}`
/// where A = max(a,b) and zeta is a primitive root of unity of order A+1.
pub fn monomial_power_decomposition(a: u32, b: u32) -> Result<WaringDecomposition> {
    let d = a + b;
    let big = a.max(b);
    let small = a.min(b);
    // index of the variable carrying the bigger exponent
    let (u_idx, v_idx) = if a >= b { (0, 1) } else { (1, 0) };
    if small == 0 {
        // pure power: one summand
        let order = 1;
        return WaringDecomposition::new(
            d,
            vec![LinearForm::var(order, 2, if a > 0 { 0 } else { 1 })],
            vec![LaurentScalar::one(order)],
        );
    }
    let order = big + 1;
    let zeta = CycloScalar::primitive_root(order, order)?;
    let norm = Rational::new(BigInt::from(1), BigInt::from(order as i64) * binomial(d, big));
    let mut forms = Vec::with_capacity(order as usize);
    let mut scales = Vec::with_capacity(order as usize);
    for k in 0..order {
        let mut coeffs = vec![LaurentScalar::zero(order); 2];
        coeffs[u_idx] = LaurentScalar::from_cyclo(zeta.pow(k));
        coeffs[v_idx] = LaurentScalar::one(order);
        forms.push(LinearForm::new(coeffs));
        scales.push(LaurentScalar::from_cyclo(zeta.pow(k)).scale_rat(&norm));
    }
    WaringDecomposition::new(d, forms, scales)
}

/// Border Waring decomposition of `x^a y^b` (a <= max exponent handling is
/// symmetric) with min(a,b)+1 summands, by the finite-difference construction
/// `(1/(C(a+b,a) a!)) eps^{-a} sum_{k=0}^{a} (-1)^{a-k} C(a,k) (y + k eps x)^{a+b}`
/// where the roles are chosen so that a <= b.
pub fn monomial_border_decomposition(a: u32, b: u32) -> Result<WaringDecomposition> {
    let d = a + b;
    let (small, _big, s_idx, b_idx) = if a <= b { (a, b, 0, 1) } else { (b, a, 1, 0) };
    if small == 0 {
        let order = 1;
        return WaringDecomposition::new(
            d,
            vec![LinearForm::var(order, 2, if a > 0 { 0 } else { 1 })],
            vec![LaurentScalar::one(order)],
        );
    }
    let order = 1;
    let mut fact = BigInt::from(1);
    for i in 2..=small as i64 {
        fact *= BigInt::from(i);
    }
    let norm = Rational::new(BigInt::from(1), binomial(d, small) * fact);
    let mut forms = Vec::with_capacity(small as usize + 1);
    let mut scales = Vec::with_capacity(small as usize + 1);
    for k in 0..=small {
        let mut coeffs = vec![LaurentScalar::zero(order); 2];
        coeffs[b_idx] = LaurentScalar::one(order);
        coeffs[s_idx] = LaurentScalar::monomial(CycloScalar::from_int(order, k as i64), 1);
        forms.push(LinearForm::new(coeffs));
        let sign = if (small - k) % 2 == 0 { 1 } else { -1 };
        let scale = LaurentScalar::monomial(CycloScalar::from_int(order, sign), -(small as i64))
            .scale_rat(&(Rational::from(binomial(small, k)) * &norm));
        scales.push(scale);
    }
    WaringDecomposition::new(d, forms, scales)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Monomial, Poly};

    fn monomial_poly(a: u32, b: u32, order: u32) -> Poly {
        let mut p = Poly::zero(order, 2);
        p.add_term(Monomial::new(vec![a, b]), &LaurentScalar::one(order));
        p
    }

    #[test]
    fn exact_decompositions() {
        for (a, b) in [(1u32, 1u32), (0, 3), (1, 2), (2, 3), (3, 1)] {
            let dec = monomial_power_decomposition(a, b).unwrap();
            assert_eq!(dec.expand(), monomial_poly(a, b, dec.order()), "({a},{b})");
            assert!(!dec.is_border());
            let expected_len = if a.min(b) == 0 { 1 } else { (a.max(b) + 1) as usize };
            assert_eq!(dec.len(), expected_len);
        }
    }

    #[test]
    fn polarization_identity() {
        // xy = 1/4 (x+y)^2 - 1/4 (x-y)^2
        let dec = monomial_power_decomposition(1, 1).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec.expand(), monomial_poly(1, 1, dec.order()));
    }

    #[test]
    fn border_decompositions() {
        for (a, b) in [(0u32, 4u32), (1, 3), (2, 2), (1, 4), (3, 2)] {
            let dec = monomial_border_decomposition(a, b).unwrap();
            let expected_len = (a.min(b) + 1) as usize;
            assert_eq!(dec.len(), expected_len, "({a},{b})");
            assert_eq!(
                dec.limit().unwrap(),
                monomial_poly(a, b, dec.order()),
                "({a},{b})"
            );
        }
    }
}
