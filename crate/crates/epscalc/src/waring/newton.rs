use super::linalg;
use crate::error::Result;
use crate::polyring::{LinearForm, Poly};

fn common_order_nvars(forms: &[LinearForm]) -> (u32, usize) {
    let order = forms.iter().map(|f| f.order()).fold(1, num::integer::lcm);
    let nvars = forms.iter().map(|f| f.nvars()).max().unwrap_or(0);
    (order, nvars)
}

/// Elementary symmetric polynomial e_k evaluated at the forms; e_0 = 1.
pub fn elementary_symmetric(forms: &[LinearForm], k: usize) -> Poly {
    let (order, nvars) = common_order_nvars(forms);
    // dp[j] = e_j of the prefix processed so far; e_j(new) = e_j + f * e_{j-1}
    let mut dp: Vec<Poly> = vec![Poly::one(order, nvars)];
    for f in forms {
        let fp = f.to_poly_n(order, nvars);
        let mut out: Vec<Poly> = Vec::with_capacity((dp.len() + 1).min(k + 1));
        for j in 0..=dp.len().min(k) {
            let mut v = if j < dp.len() {
                dp[j].clone()
            } else {
                Poly::zero(order, nvars)
            };
            if j >= 1 {
                v = v.add(&fp.mul(&dp[j - 1]));
            }
            out.push(v);
        }
        dp = out;
    }
    dp.get(k)
        .cloned()
        .unwrap_or_else(|| Poly::zero(order, nvars))
}

/// Power sum p_k = sum_i form_i^k.
pub fn power_sum(forms: &[LinearForm], k: u32) -> Poly {
    let (order, nvars) = common_order_nvars(forms);
    let mut acc = Poly::zero(order, nvars);
    for f in forms {
        acc = acc.add(&f.to_poly_n(order, nvars).pow(k));
    }
    acc
}

/// Validation harness for the Newton identity
/// `k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i`; true on exact inputs.
pub fn newton_identity_check(forms: &[LinearForm], k: usize) -> bool {
    let (order, nvars) = common_order_nvars(forms);
    let lhs = elementary_symmetric(forms, k).scale_rat(&crate::polyring::rat_int(k as i64));
    let mut rhs = Poly::zero(order, nvars);
    for i in 1..=k {
        let term = elementary_symmetric(forms, k - i).mul(&power_sum(forms, i as u32));
        if (i - 1) % 2 == 0 {
            rhs = rhs.add(&term);
        } else {
            rhs = rhs.sub(&term);
        }
    }
    lhs == rhs
}

/// Number of essential variables of an ε-free homogeneous polynomial: the
/// rank of the coefficient matrix of its first-order partials.
pub fn essential_variables(f: &Poly) -> Result<usize> {
    assert!(f.is_eps_free(), "essential_variables expects an eps-free input");
    let order = f.order();
    // collect the monomial support of all partials
    let partials: Vec<Poly> = (0..f.nvars()).map(|i| f.partial(i)).collect();
    let mut monomials: std::collections::BTreeSet<crate::polyring::Monomial> =
        std::collections::BTreeSet::new();
    for p in &partials {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    let monomials: Vec<_> = monomials.into_iter().collect();
    let rows: Vec<Vec<crate::polyring::CycloScalar>> = partials
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| p.coeff(m).as_cyclo().unwrap())
                .collect()
        })
        .collect();
    Ok(linalg::rank(&rows, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{CycloScalar, LaurentScalar, Monomial};

    fn xvar(i: usize, n: usize) -> LinearForm {
        LinearForm::var(1, n, i)
    }

    #[test]
    fn elementary_symmetric_examples() {
        let x = xvar(0, 2);
        let y = xvar(1, 2);
        let e1 = elementary_symmetric(&[x.clone(), y.clone()], 1);
        assert_eq!(e1, x.to_poly().add(&y.to_poly_n(1, 2)));
        let e2 = elementary_symmetric(&[x.clone(), y.clone()], 2);
        assert_eq!(e2, x.to_poly_n(1, 2).mul(&y.to_poly_n(1, 2)));
        // ([x, -x, y], 2) = -x^2
        let e = elementary_symmetric(&[x.clone(), x.neg(), y.clone()], 2);
        assert_eq!(e, x.to_poly_n(1, 2).pow(2).neg());
        // e_0 = 1
        assert_eq!(
            elementary_symmetric(&[x.clone()], 0),
            Poly::one(1, 1).with_nvars(1)
        );
    }

    #[test]
    fn power_sum_examples() {
        let x = xvar(0, 2);
        let y = xvar(1, 2);
        assert_eq!(
            power_sum(&[x.clone(), y.clone()], 2),
            x.to_poly_n(1, 2).pow(2).add(&y.to_poly_n(1, 2).pow(2))
        );
        assert!(power_sum(&[x.clone(), x.neg()], 3).is_zero());
        // [x, z3 x, z3^2 x] at k=3 gives 3 x^3
        let z3 = LaurentScalar::from_cyclo(CycloScalar::primitive_root(3, 3).unwrap());
        let fs = vec![
            LinearForm::var(3, 1, 0),
            LinearForm::var(3, 1, 0).scale(&z3),
            LinearForm::var(3, 1, 0).scale(&(&z3 * &z3)),
        ];
        let p3 = power_sum(&fs, 3);
        assert_eq!(p3, Poly::var(3, 1, 0).pow(3).scale_rat(&crate::polyring::rat_int(3)));
    }

    #[test]
    fn newton_identities_hold() {
        let x = xvar(0, 3);
        let y = xvar(1, 3);
        let z = xvar(2, 3);
        assert!(newton_identity_check(&[x.clone(), y.clone()], 1));
        assert!(newton_identity_check(&[x, y, z], 3));
    }

    #[test]
    fn essential_variable_counts() {
        // x1 x2 x3 -> 3
        let mut p = Poly::zero(1, 3);
        p.add_term(Monomial::new(vec![1, 1, 1]), &LaurentScalar::one(1));
        assert_eq!(essential_variables(&p).unwrap(), 3);
        // (x1+x2)^3 -> 1
        let f = LinearForm::new(vec![LaurentScalar::one(1), LaurentScalar::one(1)]);
        let q = f.to_poly().pow(3);
        assert_eq!(essential_variables(&q).unwrap(), 1);
        // x1 x2 x3 + x4^3 -> 4
        let mut r = Poly::zero(1, 4);
        r.add_term(Monomial::new(vec![1, 1, 1, 0]), &LaurentScalar::one(1));
        r.add_term(Monomial::new(vec![0, 0, 0, 3]), &LaurentScalar::one(1));
        assert_eq!(essential_variables(&r).unwrap(), 4);
    }
}
