use super::types::{KumarExpr, ProductForm, WaringDecomposition};
use crate::error::{Error, Result};
use crate::polyring::{CycloScalar, LaurentScalar, LinearForm, Poly, Rational};
use num::{BigInt, Signed, Zero};

/// Exact d-th root of a rational number, if one exists in Q.
fn rational_dth_root(q: &Rational, d: u32) -> Option<Rational> {
    if q.is_zero() {
        return Some(Rational::zero());
    }
    if q.is_negative() && d % 2 == 0 {
        return None;
    }
    let num = q.numer().abs();
    let den = q.denom().abs();
    let rn = exact_nth_root(&num, d)?;
    let rd = exact_nth_root(&den, d)?;
    let mut root = Rational::new(rn, rd);
    if q.is_negative() {
        root = -root;
    }
    Some(root)
}

fn exact_nth_root(v: &BigInt, d: u32) -> Option<BigInt> {
    let r = num::integer::Roots::nth_root(v, d);
    if num::pow::pow(r.clone(), d as usize) == *v {
        Some(r)
    } else {
        None
    }
}

/// Exact d-th root of a cyclotomic number of the shape q * ζ_N^k
/// (rational times a root of unity). Returns None when the element is not of
/// that shape or no root exists in Q(ζ_N).
fn cyclo_dth_root(c: &CycloScalar, d: u32) -> Option<CycloScalar> {
    let n = c.order();
    if c.is_zero() {
        return Some(CycloScalar::zero(n));
    }
    for k in 0..n as i64 {
        let zk_inv = CycloScalar::zeta_pow(n, -k);
        // c = q * zeta^k for rational q, else try the next k
        let Some(q) = (c * &zk_inv).as_rational() else {
            continue;
        };
        if q.is_zero() {
            continue;
        }
        // zeta^k root: solve d*x = k (mod n)
        let g = num::integer::gcd(d as i64, n as i64);
        if k % g != 0 {
            continue;
        }
        let mut x = None;
        for cand in 0..n as i64 {
            if (d as i64 * cand - k).rem_euclid(n as i64) == 0 {
                x = Some(cand);
                break;
            }
        }
        let x = x?;
        // rational root, folding -1 into the root of unity when possible
        let root_q = if let Some(r) = rational_dth_root(&q, d) {
            Some((r, 0i64))
        } else if q.is_negative() && n % 2 == 0 {
            // -1 = zeta^{n/2}; need d*y = n/2 (mod n)
            let target = (n / 2) as i64;
            let mut y = None;
            for cand in 0..n as i64 {
                if (d as i64 * cand - target).rem_euclid(n as i64) == 0 {
                    y = Some(cand);
                    break;
                }
            }
            match (rational_dth_root(&(-q.clone()), d), y) {
                (Some(r), Some(y)) => Some((r, y)),
                _ => None,
            }
        } else {
            None
        };
        if let Some((r, extra)) = root_q {
            let root =
                CycloScalar::zeta_pow(n, x + extra).scale(&r);
            if root.pow(d) == *c {
                return Some(root);
            }
        }
    }
    None
}

/// Exact d-th root of a monomial Laurent scalar gamma * eps^t with d | t.
pub(crate) fn laurent_dth_root(s: &LaurentScalar, d: u32) -> Option<LaurentScalar> {
    let mut terms = s.terms();
    let (t, c) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    if t % d as i64 != 0 {
        return None;
    }
    let root = cyclo_dth_root(c, d)?;
    Some(LaurentScalar::monomial(root, t / d as i64))
}

/// Shpilka-style Kumar expression for a Waring decomposition: with the scale
/// of each summand absorbed as a d-th root into the form, the output is
/// `alpha ((prod_{i,j} (1 - w(eps) zeta_d^j l_i)) - 1)` with
/// `alpha = -w(eps)^{-d}` and, in the border variant, `w(eps) = eps` damping
/// every stray elementary symmetric term of degree above d.
pub fn kumar_build(dec: &WaringDecomposition, border: bool) -> Result<KumarExpr> {
    let d = dec.d;
    assert!(d >= 1, "degree must be positive");
    let order = num::integer::lcm(dec.order(), d);
    if dec.is_empty() {
        return Ok(KumarExpr {
            alpha: if border {
                LaurentScalar::eps_pow(order, -(d as i64))
            } else {
                LaurentScalar::from_int(order, -1)
            },
            forms: vec![],
        });
    }
    let zeta = CycloScalar::primitive_root(order, d)?;
    let mut forms = Vec::with_capacity(dec.len() * d as usize);
    for (f, s) in dec.forms.iter().zip(&dec.scales) {
        let s = s.embed(order).unwrap();
        let sigma = laurent_dth_root(&s, d).ok_or(Error::NonRepresentableScale {
            degree: d,
            order,
        })?;
        let scaled = f.embed(order)?.scale(&sigma);
        if scaled.is_zero() {
            return Err(Error::ZeroForm);
        }
        for j in 0..d {
            let mut g = scaled.scale(&LaurentScalar::from_cyclo(zeta.pow(j)));
            g = g.neg();
            if border {
                g = g.scale(&LaurentScalar::eps_pow(order, 1));
            }
            forms.push(g);
        }
    }
    let alpha = if border {
        -&LaurentScalar::eps_pow(order, -(d as i64))
    } else {
        LaurentScalar::from_int(order, -1)
    };
    KumarExpr::new(alpha, forms)
}

/// Kumar expression for a product of d nonzero ε-free forms:
/// `eps^d ((prod (1 + eps^{-1} l_i)) - 1)`.
pub fn kumar_product_build(forms: &[LinearForm]) -> Result<KumarExpr> {
    if forms.iter().any(|f| f.is_zero()) {
        return Err(Error::ZeroForm);
    }
    let order = forms.iter().map(|f| f.order()).fold(1, num::integer::lcm);
    let d = forms.len() as i64;
    let scaled: Vec<LinearForm> = forms
        .iter()
        .map(|f| f.scale(&LaurentScalar::eps_pow(order, -1)))
        .collect();
    KumarExpr::new(LaurentScalar::eps_pow(order, d), scaled)
}

/// The three α-regimes of border Kumar complexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KumarRegime {
    Plus,
    Equal,
    Minus,
}

/// Sign of the minimal ε-exponent of alpha.
pub fn classify_kumar(e: &KumarExpr) -> Result<KumarRegime> {
    match e.alpha.min_exponent() {
        None => Err(Error::ZeroAlpha),
        Some(n) if n > 0 => Ok(KumarRegime::Plus),
        Some(0) => Ok(KumarRegime::Equal),
        Some(_) => Ok(KumarRegime::Minus),
    }
}

/// Result of inverting a Kumar expression.
#[derive(Clone, Debug, PartialEq)]
pub enum KumarInverse {
    Waring(WaringDecomposition),
    Product(ProductForm),
}

impl KumarInverse {
    pub fn limit(&self) -> Result<Poly> {
        match self {
            KumarInverse::Waring(w) => w.limit(),
            KumarInverse::Product(p) => p.expand().limit(),
        }
    }
}

/// Invert a Kumar expression whose expansion has a homogeneous degree-d
/// limit f:
/// * Minus/Equal regimes: a (border) Waring decomposition with m summands
///   `gamma eps^{-M+d} (1/d) (-1)^{d-1} p_d(l)` whose limit equals f
///   (exact and ε-free in the Equal regime);
/// * Plus regime: the product factorization read off the lowest-order parts.
pub fn kumar_invert(e: &KumarExpr, d: u32) -> Result<KumarInverse> {
    let regime = classify_kumar(e)?;
    let order = e.order();
    let expansion = e.expand();
    // the limit must exist and be homogeneous of degree d
    let mut f = Poly::zero(order, e.nvars());
    for j in 0..=expansion.max_degree() {
        let part = expansion.homogeneous_part(j);
        let lim = part.limit()?;
        if j == d as usize {
            f = lim;
        } else if !lim.is_zero() {
            return Err(Error::NotHomogeneousLimit {
                degree: j,
                residue: format!("{lim}"),
            });
        }
    }
    // effective alpha: only the lowest term contributes to the limit
    let n0 = e.alpha.min_exponent().unwrap();
    let gamma = e.alpha.coeff(n0);
    match regime {
        KumarRegime::Plus => {
            if f.is_zero() {
                return Ok(KumarInverse::Product(ProductForm {
                    scale: LaurentScalar::zero(order),
                    forms: vec![],
                }));
            }
            // factors with poles contribute their lowest-order linear part;
            // the total eps-order must balance alpha's positive order
            let mut forms = Vec::new();
            let mut total_order = n0;
            for l in &e.forms {
                let (q, low) = l.lowest_order_form().ok_or(Error::ZeroForm)?;
                if q < 0 {
                    total_order += q;
                    forms.push(low);
                }
            }
            let scale = if total_order == 0 {
                LaurentScalar::from_cyclo(gamma)
            } else {
                LaurentScalar::zero(order)
            };
            let candidate = ProductForm { scale, forms };
            if candidate.expand() != f {
                return Err(Error::ConstraintViolation(
                    "plus-regime factor readoff does not reproduce the limit".into(),
                ));
            }
            Ok(KumarInverse::Product(candidate))
        }
        KumarRegime::Equal => {
            // all forms must converge; set eps = 0
            let mut forms0 = Vec::with_capacity(e.m());
            for l in &e.forms {
                if let Some(q) = l.min_eps_order() {
                    if q < 0 {
                        return Err(Error::DivergentLimit {
                            monomial: vec![],
                            min_exponent: q,
                        });
                    }
                }
                forms0.push(l.eps_coefficient(0));
            }
            let scale = LaurentScalar::from_cyclo(gamma)
                .scale_rat(&newton_scale(d));
            let scales = vec![scale; forms0.len()];
            let dec = WaringDecomposition::new(d, forms0, scales)?;
            if dec.expand() != f {
                return Err(Error::ConstraintViolation(
                    "equal-regime Newton reconstruction failed".into(),
                ));
            }
            Ok(KumarInverse::Waring(dec))
        }
        KumarRegime::Minus => {
            let m_exp = -n0; // alpha ~ gamma eps^{-M}
            // every form must be divisible by eps
            let mut forms = Vec::with_capacity(e.m());
            for l in &e.forms {
                let q = l.min_eps_order().ok_or(Error::ZeroForm)?;
                if q < 1 {
                    return Err(Error::DivergentLimit {
                        monomial: vec![],
                        min_exponent: q - 1,
                    });
                }
                forms.push(l.scale(&LaurentScalar::eps_pow(order, -1)));
            }
            let scale = LaurentScalar::monomial(gamma, -m_exp + d as i64)
                .scale_rat(&newton_scale(d));
            let scales = vec![scale; forms.len()];
            let dec = WaringDecomposition::new(d, forms, scales)?;
            let lim = dec.limit()?;
            if lim != f {
                return Err(Error::ConstraintViolation(
                    "border Newton reconstruction does not reproduce the limit".into(),
                ));
            }
            Ok(KumarInverse::Waring(dec))
        }
    }
}

/// (1/d) * (-1)^{d-1}
fn newton_scale(d: u32) -> Rational {
    let sign = if (d - 1) % 2 == 0 { 1 } else { -1 };
    Rational::new(BigInt::from(sign), BigInt::from(d as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat_int;

    fn xf(i: usize, n: usize) -> LinearForm {
        LinearForm::var(1, n, i)
    }

    #[test]
    fn dth_roots() {
        let r = rational_dth_root(&Rational::new(8.into(), 27.into()), 3).unwrap();
        assert_eq!(r, Rational::new(2.into(), 3.into()));
        assert!(rational_dth_root(&rat_int(-4), 2).is_none());
        assert_eq!(rational_dth_root(&rat_int(-8), 3).unwrap(), rat_int(-2));
        // zeta_12^3 has cube root zeta_12
        let c = CycloScalar::zeta_pow(12, 3);
        let r = cyclo_dth_root(&c, 3).unwrap();
        assert_eq!(r.pow(3), c);
        // zeta_6^2 has no cube root in Q(zeta_6)
        assert!(cyclo_dth_root(&CycloScalar::zeta_pow(6, 2), 3).is_none());
        // -4 has a square root in Q(zeta_4): 2i
        let c = CycloScalar::from_int(4, -4);
        let r = cyclo_dth_root(&c, 2).unwrap();
        assert_eq!(r.pow(2), c);
    }

    #[test]
    fn power_of_linear_form_is_exact() {
        // f = x^d: the exact Kumar expression prod(1 + zeta^j x) - 1 times -1
        for d in [2u32, 3, 4] {
            let dec = WaringDecomposition::new(
                d,
                vec![xf(0, 1)],
                vec![LaurentScalar::one(1)],
            )
            .unwrap();
            let e = kumar_build(&dec, false).unwrap();
            assert_eq!(e.m(), d as usize);
            assert_eq!(e.expand(), dec.expand().embed(e.order()).unwrap());
        }
    }

    #[test]
    fn border_build_roundtrip_x2_y2() {
        let dec = WaringDecomposition::new(
            2,
            vec![xf(0, 2), xf(1, 2)],
            vec![LaurentScalar::one(1), LaurentScalar::one(1)],
        )
        .unwrap();
        let e = kumar_build(&dec, true).unwrap();
        assert_eq!(e.m(), 4);
        assert!(e
            .expand()
            .equiv_mod_eps(&dec.expand().embed(e.order()).unwrap()));
        // and inversion recovers a border decomposition with the same limit
        match kumar_invert(&e, 2).unwrap() {
            KumarInverse::Waring(w) => {
                assert!(w.len() <= 4);
                assert_eq!(
                    w.limit().unwrap(),
                    dec.expand().embed(w.order()).unwrap()
                );
            }
            other => panic!("expected waring, got {other:?}"),
        }
    }

    #[test]
    fn product_build_and_plus_inversion() {
        // [x] -> eps((1 + eps^-1 x) - 1) = x
        let e = kumar_product_build(&[xf(0, 1)]).unwrap();
        assert_eq!(e.expand(), Poly::var(1, 1, 0));
        // [x, y, z] -> Plus regime reads off the factors
        let forms = vec![xf(0, 3), xf(1, 3), xf(2, 3)];
        let e = kumar_product_build(&forms).unwrap();
        let expect = forms
            .iter()
            .fold(Poly::one(1, 3), |acc, f| acc.mul(&f.to_poly_n(1, 3)));
        assert!(e.expand().equiv_mod_eps(&expect));
        assert_eq!(classify_kumar(&e).unwrap(), KumarRegime::Plus);
        match kumar_invert(&e, 3).unwrap() {
            KumarInverse::Product(p) => {
                assert_eq!(p.forms.len(), 3);
                assert_eq!(p.expand(), expect);
            }
            other => panic!("expected product, got {other:?}"),
        }
        // [x, x, x] limit x^3
        let e = kumar_product_build(&[xf(0, 1), xf(0, 1), xf(0, 1)]).unwrap();
        assert!(e.expand().equiv_mod_eps(&Poly::var(1, 1, 0).pow(3)));
    }

    #[test]
    fn classify_regimes() {
        let forms = vec![xf(0, 1)];
        let mk = |alpha: LaurentScalar| KumarExpr::new(alpha, forms.clone()).unwrap();
        assert_eq!(
            classify_kumar(&mk(LaurentScalar::eps_pow(1, 2))).unwrap(),
            KumarRegime::Plus
        );
        assert_eq!(
            classify_kumar(&mk(LaurentScalar::from_int(1, 3))).unwrap(),
            KumarRegime::Equal
        );
        let a = &LaurentScalar::eps_pow(1, -1) + &LaurentScalar::one(1);
        assert_eq!(classify_kumar(&mk(a)).unwrap(), KumarRegime::Minus);
        assert!(classify_kumar(&mk(LaurentScalar::zero(1))).is_err());
    }

    #[test]
    fn equal_regime_exact_newton() {
        // forms with e_1 = e_2 = 0 and d = 3: p_3 proportional to e_3.
        // Take the canonical family -zeta_3^j x: e_1 = e_2 = 0.
        let z = CycloScalar::primitive_root(3, 3).unwrap();
        let forms: Vec<LinearForm> = (0..3)
            .map(|j| {
                LinearForm::var(3, 1, 0)
                    .scale(&LaurentScalar::from_cyclo(z.pow(j)))
                    .neg()
            })
            .collect();
        let e = KumarExpr::new(LaurentScalar::one(3), forms).unwrap();
        match kumar_invert(&e, 3).unwrap() {
            KumarInverse::Waring(w) => {
                assert!(!w.is_border());
                assert_eq!(w.expand(), e.expand());
            }
            other => panic!("expected waring, got {other:?}"),
        }
    }
}
