use crate::error::{Error, Result};
use crate::polyring::{CycloScalar, LaurentScalar, LinearForm, Monomial, Poly};

/// The product-plus-power polynomial `sum_{i<=r} prod_{j<=d} x_{ji} + sum_{i<=s} y_i^d`
/// in r*d + s variables: block i occupies variables (i-1)*d .. i*d - 1 and
/// y_i sits at index r*d + i - 1.
pub fn product_plus_power(order: u32, d: u32, r: u32, s: u32) -> Poly {
    let n = (d * r + s) as usize;
    let mut p = Poly::zero(order, n);
    for i in 0..r as usize {
        let mut exps = vec![0u32; n];
        for j in 0..d as usize {
            exps[i * d as usize + j] = 1;
        }
        p.add_term(Monomial::new(exps), &LaurentScalar::one(order));
    }
    for i in 0..s as usize {
        let mut exps = vec![0u32; n];
        exps[(r * d) as usize + i] = d;
        p.add_term(Monomial::new(exps), &LaurentScalar::one(order));
    }
    p
}

/// Matrices acting on the variables, represented row-wise: the substitution
/// sends x_k to sum_l g[k][l] * x_l, applied through `substitute_linear`.
pub type GeneratorMatrix = Vec<Vec<LaurentScalar>>;

fn identity(order: u32, n: usize) -> GeneratorMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentScalar::one(order)
                    } else {
                        LaurentScalar::zero(order)
                    }
                })
                .collect()
        })
        .collect()
}

/// Generators of the stabilizer of `P^{[d]}_{r,s}`:
/// within-block torus elements diag(t, t^{-1}, 1, …) with t a root of unity
/// of order > d, within-block adjacent transpositions, adjacent block swaps,
/// zeta_d scalings of single y's and adjacent y swaps.
///
/// The cyclotomic order of the entries is `lcm(d, d+1)` so that both a
/// primitive d-th root (for the y-scalings) and a torus representative of
/// order d+1 (separating all degree-<=d weight differences) are available.
pub fn stabilizer_generators(d: u32, r: u32, s: u32) -> Vec<GeneratorMatrix> {
    let order = num::integer::lcm(d, d + 1);
    let n = (d * r + s) as usize;
    let t = CycloScalar::primitive_root(order, d + 1).unwrap();
    let zeta_d = CycloScalar::primitive_root(order, d).unwrap();
    let mut gens = Vec::new();
    let xvar = |block: u32, j: u32| (block * d + j) as usize;
    for block in 0..r {
        // torus: scale x_{block,j} by t and x_{block,j+1} by t^{-1}
        for j in 0..d.saturating_sub(1) {
            let mut g = identity(order, n);
            g[xvar(block, j)][xvar(block, j)] = LaurentScalar::from_cyclo(t.clone());
            g[xvar(block, j + 1)][xvar(block, j + 1)] =
                LaurentScalar::from_cyclo(t.inverse().unwrap());
            gens.push(g);
        }
        // adjacent transpositions within the block
        for j in 0..d.saturating_sub(1) {
            let mut g = identity(order, n);
            let (a, b) = (xvar(block, j), xvar(block, j + 1));
            g[a][a] = LaurentScalar::zero(order);
            g[b][b] = LaurentScalar::zero(order);
            g[a][b] = LaurentScalar::one(order);
            g[b][a] = LaurentScalar::one(order);
            gens.push(g);
        }
    }
    // adjacent block swaps
    for block in 0..r.saturating_sub(1) {
        let mut g = identity(order, n);
        for j in 0..d {
            let (a, b) = (xvar(block, j), xvar(block + 1, j));
            g[a][a] = LaurentScalar::zero(order);
            g[b][b] = LaurentScalar::zero(order);
            g[a][b] = LaurentScalar::one(order);
            g[b][a] = LaurentScalar::one(order);
        }
        gens.push(g);
    }
    // y scalings by zeta_d and adjacent y swaps
    for i in 0..s {
        let mut g = identity(order, n);
        let k = (r * d + i) as usize;
        g[k][k] = LaurentScalar::from_cyclo(zeta_d.clone());
        gens.push(g);
    }
    for i in 0..s.saturating_sub(1) {
        let mut g = identity(order, n);
        let (a, b) = ((r * d + i) as usize, (r * d + i + 1) as usize);
        g[a][a] = LaurentScalar::zero(order);
        g[b][b] = LaurentScalar::zero(order);
        g[a][b] = LaurentScalar::one(order);
        g[b][a] = LaurentScalar::one(order);
        gens.push(g);
    }
    gens
}

/// Apply a generator matrix to a polynomial in rd+s variables.
pub fn apply_generator(f: &Poly, g: &GeneratorMatrix) -> Result<Poly> {
    let map: Vec<LinearForm> = g.iter().map(|row| LinearForm::new(row.clone())).collect();
    f.substitute_linear(&map)
}

/// True iff g fixes `P^{[d]}_{r,s}`.
pub fn verify_stabilizer(g: &GeneratorMatrix, d: u32, r: u32, s: u32) -> Result<bool> {
    let order = g
        .iter()
        .flat_map(|row| row.iter().map(|c| c.order()))
        .fold(1, num::integer::lcm);
    let p = product_plus_power(order, d, r, s);
    Ok(apply_generator(&p, g)? == p)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Characterization {
    /// f = alpha * sum of block products + beta * sum of d-th powers
    Invariant {
        alpha: LaurentScalar,
        beta: LaurentScalar,
    },
    /// A generator (by index into `stabilizer_generators`) that moves f.
    NotInvariant { witness: usize },
}

/// Check whether f is fixed by the stabilizer generators of `P^{[d]}_{r,s}`;
/// if so, f must be the two-parameter combination, whose coefficients are
/// read off the first block product and the first power monomial.
pub fn characterize_by_stabilizer(f: &Poly, d: u32, r: u32, s: u32) -> Result<Characterization> {
    let n = (d * r + s) as usize;
    if f.nvars() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: f.nvars(),
        });
    }
    let gens = stabilizer_generators(d, r, s);
    let order = num::integer::lcm(f.order(), num::integer::lcm(d, d + 1));
    let f = f.embed(order)?;
    for (i, g) in gens.iter().enumerate() {
        if apply_generator(&f, g)? != f {
            return Ok(Characterization::NotInvariant { witness: i });
        }
    }
    // read off alpha from x_{1,1}...x_{1,d} and beta from y_1^d
    let mut prod_exps = vec![0u32; n];
    for j in 0..d as usize {
        prod_exps[j] = 1;
    }
    let alpha = if r > 0 {
        f.coeff(&Monomial::new(prod_exps))
    } else {
        LaurentScalar::zero(order)
    };
    let beta = if s > 0 {
        let mut pow_exps = vec![0u32; n];
        pow_exps[(r * d) as usize] = d;
        f.coeff(&Monomial::new(pow_exps))
    } else {
        LaurentScalar::zero(order)
    };
    // the two-parameter form must reproduce f exactly
    let mut expect = Poly::zero(order, n);
    for i in 0..r as usize {
        let mut exps = vec![0u32; n];
        for j in 0..d as usize {
            exps[i * d as usize + j] = 1;
        }
        expect.add_term(Monomial::new(exps), &alpha);
    }
    for i in 0..s as usize {
        let mut exps = vec![0u32; n];
        exps[(r * d) as usize + i] = d;
        expect.add_term(Monomial::new(exps), &beta);
    }
    if expect != f {
        return Err(Error::ConstraintViolation(
            "invariant under generators but not of the two-parameter form".into(),
        ));
    }
    Ok(Characterization::Invariant { alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat_int;

    #[test]
    fn generators_fix_p() {
        for (d, r, s) in [(3u32, 1u32, 1u32), (3, 2, 2), (4, 1, 2)] {
            for g in stabilizer_generators(d, r, s) {
                assert!(verify_stabilizer(&g, d, r, s).unwrap());
            }
        }
    }

    #[test]
    fn generic_diagonal_moves_p() {
        let (d, r, s) = (3u32, 1u32, 1u32);
        let order = num::integer::lcm(d, d + 1);
        let n = (d * r + s) as usize;
        let mut g = identity(order, n);
        g[0][0] = LaurentScalar::from_int(order, 2);
        assert!(!verify_stabilizer(&g, d, r, s).unwrap());
    }

    #[test]
    fn characterization_outputs() {
        let (d, r, s) = (3u32, 1u32, 1u32);
        let order = num::integer::lcm(d, d + 1);
        let p = product_plus_power(order, d, r, s);
        match characterize_by_stabilizer(&p, d, r, s).unwrap() {
            Characterization::Invariant { alpha, beta } => {
                assert_eq!(alpha, LaurentScalar::one(order));
                assert_eq!(beta, LaurentScalar::one(order));
            }
            other => panic!("expected invariant, got {other:?}"),
        }
        // 2 * product part only
        let n = (d * r + s) as usize;
        let mut f = Poly::zero(order, n);
        f.add_term(Monomial::new(vec![1, 1, 1, 0]), &LaurentScalar::from_int(order, 2));
        match characterize_by_stabilizer(&f, d, r, s).unwrap() {
            Characterization::Invariant { alpha, beta } => {
                assert_eq!(alpha, LaurentScalar::from_rational(order, rat_int(2)));
                assert!(beta.is_zero());
            }
            other => panic!("expected invariant, got {other:?}"),
        }
        // x_{11}^d is moved by the torus
        let mut h = Poly::zero(order, n);
        h.add_term(Monomial::new(vec![3, 0, 0, 0]), &LaurentScalar::one(order));
        assert!(matches!(
            characterize_by_stabilizer(&h, d, r, s).unwrap(),
            Characterization::NotInvariant { .. }
        ));
    }
}
