use crate::error::{Error, Result};
use crate::polyring::Poly;

/// Noncommutative elementary symmetric polynomial
/// `ē_d(X_1,…,X_n) = sum over increasing index tuples of X_{I_1}⋯X_{I_d}`
/// for square polynomial matrices, by the prefix recurrence
/// `E_j ← E_j + E_{j-1} · X_i`.
pub fn nc_elementary(matrices: &[Vec<Vec<Poly>>], d: usize) -> Result<Vec<Vec<Poly>>> {
    let dim = matrices.first().map(|m| m.len()).unwrap_or(0);
    for m in matrices {
        if m.len() != dim || m.iter().any(|r| r.len() != dim) {
            return Err(Error::MalformedCircuit(
                "nc_elementary: dimension mismatch".into(),
            ));
        }
    }
    let (order, nvars) = matrices
        .iter()
        .flatten()
        .flatten()
        .fold((1u32, 0usize), |(o, n), p| {
            (num::integer::lcm(o, p.order()), n.max(p.nvars()))
        });
    let zero = || {
        (0..dim)
            .map(|_| (0..dim).map(|_| Poly::zero(order, nvars)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let ident = || {
        let mut m = zero();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Poly::one(order, nvars);
        }
        m
    };
    let mat_mul = |a: &Vec<Vec<Poly>>, b: &Vec<Vec<Poly>>| {
        let mut out = zero();
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Poly::zero(order, nvars);
                for (k, bk) in b.iter().enumerate() {
                    acc = acc.add(&a[i][k].mul(&bk[j]));
                }
                out[i][j] = acc;
            }
        }
        out
    };
    let mat_add = |a: &Vec<Vec<Poly>>, b: &Vec<Vec<Poly>>| {
        let mut out = zero();
        for i in 0..dim {
            for j in 0..dim {
                out[i][j] = a[i][j].add(&b[i][j]);
            }
        }
        out
    };
    // dp[j] = ē_j of the prefix; ē_j(new) = ē_j + ē_{j-1} · X_i
    let mut dp: Vec<Vec<Vec<Poly>>> = vec![ident()];
    for x in matrices {
        let mut next: Vec<Vec<Vec<Poly>>> = Vec::with_capacity((dp.len() + 1).min(d + 1));
        for j in 0..=dp.len().min(d) {
            let mut v = if j < dp.len() { dp[j].clone() } else { zero() };
            if j >= 1 {
                v = mat_add(&v, &mat_mul(&dp[j - 1], x));
            }
            next.push(v);
        }
        dp = next;
    }
    Ok(if dp.len() > d {
        dp.swap_remove(d)
    } else {
        zero()
    })
}

/// The parity-alternating elementary symmetric polynomial, computed from the
/// 2×2 matrix product with `X_i` upper or lower triangular by the parity of i
/// and read off as the single nonzero entry of row 1.
pub fn c_poly(n: usize, d: usize) -> Poly {
    let order = 1;
    let matrices: Vec<Vec<Vec<Poly>>> = (1..=n)
        .map(|i| {
            let x = Poly::var(order, n, i - 1);
            let z = || Poly::zero(order, n);
            if i % 2 == 1 {
                vec![vec![z(), x], vec![z(), z()]]
            } else {
                vec![vec![z(), z()], vec![x, z()]]
            }
        })
        .collect();
    let a = nc_elementary(&matrices, d).expect("square 2x2 inputs");
    a[0][0].add(&a[0][1])
}

/// Direct enumeration of increasing parity-alternating sequences starting
/// odd; cross-check for the matrix route.
pub fn c_poly_enumerated(n: usize, d: usize) -> Poly {
    let order = 1;
    let mut acc = Poly::zero(order, n);
    fn rec(
        n: usize,
        d: usize,
        start: usize,
        parity: usize,
        cur: &mut Vec<usize>,
        acc: &mut Poly,
        order: u32,
    ) {
        if cur.len() == d {
            let mut term = Poly::one(order, n);
            for &i in cur.iter() {
                term = term.mul(&Poly::var(order, n, i - 1));
            }
            *acc = acc.add(&term);
            return;
        }
        for i in start..=n {
            if i % 2 != parity {
                continue;
            }
            cur.push(i);
            rec(n, d, i + 1, 1 - parity, cur, acc, order);
            cur.pop();
        }
    }
    rec(n, d, 1, 1, &mut Vec::new(), &mut acc, order);
    acc
}

/// Evaluate `C_{r,d}` at the given linear forms (substitution into the
/// enumerated polynomial).
pub fn c_poly_at(
    r: usize,
    d: usize,
    forms: &[crate::polyring::LinearForm],
) -> Result<Poly> {
    assert_eq!(forms.len(), r);
    c_poly(r, d).substitute_linear(forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{LaurentScalar, Monomial};

    #[test]
    fn small_cases() {
        // C_{3,3} = x1 x2 x3
        let c = c_poly(3, 3);
        let mut expect = Poly::zero(1, 3);
        expect.add_term(Monomial::new(vec![1, 1, 1]), &LaurentScalar::one(1));
        assert_eq!(c, expect);
        // C_{n,1} = x1 + x3 + x5 + ...
        let c = c_poly(6, 1);
        let mut expect = Poly::zero(1, 6);
        for i in [0usize, 2, 4] {
            expect.add_term(Monomial::var(i), &LaurentScalar::one(1));
        }
        assert_eq!(c, expect);
        // C_{5,3} has the four listed monomials
        let c = c_poly(5, 3);
        assert_eq!(c.num_terms(), 4);
        for exps in [
            vec![1, 1, 1, 0, 0],
            vec![1, 1, 0, 0, 1],
            vec![1, 0, 0, 1, 1],
            vec![0, 0, 1, 1, 1],
        ] {
            assert!(!c.coeff(&Monomial::new(exps)).is_zero());
        }
    }

    #[test]
    fn matrix_equals_enumeration() {
        for n in 1..=8usize {
            for d in 1..=n {
                assert_eq!(c_poly(n, d), c_poly_enumerated(n, d), "C_{{{n},{d}}}");
            }
        }
    }

    #[test]
    fn parity_drop() {
        // C_{n,d} = C_{n-1,d} when n and d have different parity
        for (n, d) in [(4usize, 3usize), (6, 3), (5, 2), (7, 4)] {
            assert_eq!(c_poly(n, d), c_poly(n - 1, d).with_nvars(n));
        }
    }

    #[test]
    fn nc_elementary_degenerate() {
        // d = 1 gives the sum; d > n gives zero
        let x = Poly::var(1, 2, 0);
        let y = Poly::var(1, 2, 1);
        let z = || Poly::zero(1, 2);
        let m1 = vec![vec![x.clone(), z()], vec![z(), z()]];
        let m2 = vec![vec![z(), y.clone()], vec![z(), z()]];
        let s = nc_elementary(&[m1.clone(), m2.clone()], 1).unwrap();
        assert_eq!(s[0][0], x);
        assert_eq!(s[0][1], y);
        let e3 = nc_elementary(&[m1, m2], 3).unwrap();
        assert!(e3.iter().flatten().all(|p| p.is_zero()));
    }
}
