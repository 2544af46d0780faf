use super::Partition;
use crate::error::{Error, Result};
use crate::polyring::Rational;
use num::{BigInt, One, Signed, Zero};
use std::collections::HashMap;

/// Pieri precedence: mu ⪯ lambda iff mu ⊆ lambda and the skew diagram
/// lambda/mu has at most one box in each column. Equivalent to the
/// interlacing condition lambda_1 ≥ mu_1 ≥ lambda_2 ≥ mu_2 ≥ … .
pub fn pieri_precedes(mu: &Partition, lam: &Partition) -> bool {
    if !lam.contains(mu) {
        return false;
    }
    (0..lam.len()).all(|i| mu.part(i) >= lam.part(i + 1))
}

/// Memoization context for characters, plethysm tables and power-sum
/// expansions. Per-scan, not global.
#[derive(Default)]
pub struct SymCtx {
    char_cache: HashMap<(Vec<u32>, Vec<u32>), i128>,
    schur_tables: HashMap<(u32, u32), HashMap<Partition, i64>>,
}

impl SymCtx {
    pub fn new() -> Self {
        Self::default()
    }

    /// Irreducible symmetric group character chi^lambda(nu) via the
    /// Murnaghan–Nakayama rule, implemented on beta-numbers: removing a
    /// border strip of size t replaces a beta-number b by b - t.
    pub fn character(&mut self, lam: &Partition, nu: &Partition) -> Result<i128> {
        if lam.size() != nu.size() {
            return Err(Error::SizeMismatch(format!(
                "character: |{lam}| != |{nu}|"
            )));
        }
        let mut rho = nu.parts().to_vec();
        rho.sort_unstable_by(|a, b| b.cmp(a));
        Ok(self.char_rec(lam.parts().to_vec(), rho))
    }

    fn char_rec(&mut self, shape: Vec<u32>, rho: Vec<u32>) -> i128 {
        if rho.is_empty() {
            return 1; // shape must be empty too
        }
        let key = (shape.clone(), rho.clone());
        if let Some(&v) = self.char_cache.get(&key) {
            return v;
        }
        let t = rho[0];
        let rest: Vec<u32> = rho[1..].to_vec();
        // beta numbers: lambda_i + (L - i), i = 1..L (strictly decreasing)
        let l = shape.len();
        let betas: Vec<i64> = (0..l)
            .map(|i| shape[i] as i64 + (l - 1 - i) as i64)
            .collect();
        let mut total: i128 = 0;
        for (i, &b) in betas.iter().enumerate() {
            let nb = b - t as i64;
            if nb < 0 || betas.contains(&nb) {
                continue;
            }
            // height = number of beta entries strictly between nb and b
            let height = betas.iter().filter(|&&x| x < b && x > nb).count();
            let sign = if height % 2 == 0 { 1 } else { -1 };
            let mut nbetas = betas.clone();
            nbetas[i] = nb;
            nbetas.sort_unstable_by(|a, b| b.cmp(a));
            // convert back to a shape
            let ll = nbetas.len();
            let mut nshape: Vec<u32> = (0..ll)
                .map(|j| (nbetas[j] - (ll - 1 - j) as i64) as u32)
                .collect();
            while nshape.last() == Some(&0) {
                nshape.pop();
            }
            total += sign as i128 * self.char_rec(nshape, rest.clone());
        }
        self.char_cache.insert(key, total);
        total
    }

    /// Power-sum expansion of h_outer[h_inner] (the GL-character of
    /// Sym^outer(Sym^inner)), as a map cycle-type -> rational coefficient.
    fn plethysm_p_expansion(&mut self, outer: u32, inner: u32) -> HashMap<Partition, Rational> {
        // p_k[h_inner] = sum_{mu |- inner} p_{k*mu} / z_mu
        let pk = |k: u32| -> HashMap<Partition, Rational> {
            let mut out = HashMap::new();
            for mu in Partition::all(inner) {
                let z = Rational::from(mu.z_factor());
                out.insert(mu.stretch(k), Rational::one() / z);
            }
            if inner == 0 {
                out.insert(Partition::empty(), Rational::one());
            }
            out
        };
        // h_j[h_inner] via j*H_j = sum_{k=1..j} P_k * H_{j-k}
        let mut h: Vec<HashMap<Partition, Rational>> = Vec::with_capacity(outer as usize + 1);
        let mut unit = HashMap::new();
        unit.insert(Partition::empty(), Rational::one());
        h.push(unit);
        for j in 1..=outer {
            let mut acc: HashMap<Partition, Rational> = HashMap::new();
            for k in 1..=j {
                let pkv = pk(k);
                let hv = &h[(j - k) as usize];
                for (r1, c1) in &pkv {
                    for (r2, c2) in hv {
                        let merged = r1.merge(r2);
                        let e = acc.entry(merged).or_insert_with(Rational::zero);
                        *e += c1 * c2;
                    }
                }
            }
            let jr = Rational::from(BigInt::from(j));
            for v in acc.values_mut() {
                *v /= jr.clone();
            }
            acc.retain(|_, v| !v.is_zero());
            h.push(acc);
        }
        h.pop().unwrap()
    }

    /// Full Schur expansion of Sym^outer(Sym^inner) restricted to partitions
    /// with at most `max_len` rows; memoized per (outer, inner) — the table
    /// stores all lengths, the filter is applied on lookup.
    fn schur_table(&mut self, outer: u32, inner: u32) -> &HashMap<Partition, i64> {
        if !self.schur_tables.contains_key(&(outer, inner)) {
            let pexp = self.plethysm_p_expansion(outer, inner);
            let n = outer * inner;
            let mut table: HashMap<Partition, i64> = HashMap::new();
            let lambdas = Partition::all(n);
            for lam in &lambdas {
                // <f, s_lambda> = sum_rho c_rho * chi^lambda(rho)
                let mut acc = Rational::zero();
                for (rho, c) in &pexp {
                    let chi = self.char_rec(lam.parts().to_vec(), {
                        let mut r = rho.parts().to_vec();
                        r.sort_unstable_by(|a, b| b.cmp(a));
                        r
                    });
                    if chi != 0 {
                        acc += c * Rational::from(BigInt::from(chi));
                    }
                }
                assert!(acc.is_integer(), "plethysm multiplicity must be integral");
                let v = acc.to_integer();
                assert!(!v.is_negative(), "plethysm multiplicity must be nonnegative");
                if !v.is_zero() {
                    table.insert(lam.clone(), i64::try_from(v).expect("multiplicity overflow"));
                }
            }
            self.schur_tables.insert((outer, inner), table);
        }
        self.schur_tables.get(&(outer, inner)).unwrap()
    }

    /// Plethysm coefficient a_mu(outer, inner) = mult_mu Sym^outer(Sym^inner).
    pub fn plethysm(&mut self, mu: &Partition, outer: u32, inner: u32) -> Result<u64> {
        if mu.size() != outer * inner {
            return Err(Error::SizeMismatch(format!(
                "plethysm: |{mu}| = {} != {} * {}",
                mu.size(),
                outer,
                inner
            )));
        }
        Ok(self.schur_table(outer, inner).get(mu).copied().unwrap_or(0) as u64)
    }

    /// All nonzero Schur coefficients of Sym^outer(Sym^inner).
    pub fn plethysm_full(&mut self, outer: u32, inner: u32) -> HashMap<Partition, i64> {
        self.schur_table(outer, inner).clone()
    }
}

/// Convenience wrapper around a fresh context.
pub fn plethysm_coeff(mu: &Partition, outer: u32, inner: u32) -> Result<u64> {
    SymCtx::new().plethysm(mu, outer, inner)
}

/// Convenience wrapper: chi^lambda(nu) in a fresh context.
pub fn mn_character(lam: &Partition, nu: &Partition) -> Result<i128> {
    SymCtx::new().character(lam, nu)
}

/// Dimension of the irreducible GL_n representation S_lambda(C^n) via the
/// hook content formula.
pub fn weyl_dimension(lam: &Partition, n: u32) -> BigInt {
    if lam.len() > n as usize {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let t = lam.transpose();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row as usize {
            let content = j as i64 - i as i64;
            let hook = (row as i64 - j as i64) + (t.part(j) as i64 - i as i64) - 1;
            num *= BigInt::from(n as i64 + content);
            den *= BigInt::from(hook);
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn pieri_examples() {
        assert!(pieri_precedes(&p(&[2, 1]), &p(&[3, 1])));
        assert!(!pieri_precedes(&p(&[1, 1]), &p(&[3, 3])));
        let lam = p(&[4, 2, 1]);
        assert!(pieri_precedes(&lam, &lam));
    }

    #[test]
    fn characters_small() {
        let mut ctx = SymCtx::new();
        // trivial character
        for nu in Partition::all(5) {
            assert_eq!(ctx.character(&p(&[5]), &nu).unwrap(), 1);
        }
        // sign character
        for nu in Partition::all(4) {
            assert_eq!(
                ctx.character(&p(&[1, 1, 1, 1]), &nu).unwrap(),
                nu.cycle_type_sign() as i128
            );
        }
        // dimension of (2,1) is 2
        assert_eq!(ctx.character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        // standard table entry: chi^{(3,2)}((2,2,1)) = 1
        assert_eq!(ctx.character(&p(&[3, 2]), &p(&[2, 2, 1])).unwrap(), 1);
    }

    #[test]
    fn character_column_orthogonality() {
        // sum_lambda chi^lambda(mu) chi^lambda(nu) = z_mu delta_{mu,nu}
        let mut ctx = SymCtx::new();
        for n in 1..=6u32 {
            let parts = Partition::all(n);
            for mu in &parts {
                for nu in &parts {
                    let mut s: i128 = 0;
                    for lam in &parts {
                        s += ctx.character(lam, mu).unwrap() * ctx.character(lam, nu).unwrap();
                    }
                    let expect = if mu == nu {
                        i128::try_from(mu.z_factor()).unwrap()
                    } else {
                        0
                    };
                    assert_eq!(s, expect, "orthogonality failed at {mu} {nu}");
                }
            }
        }
    }

    #[test]
    fn plethysm_sym2_sym_d() {
        // Sym^2(Sym^d) = sum over even second rows: (2d-2j, 2j), j = 0..floor(d/2)
        let mut ctx = SymCtx::new();
        for d in 1..=5u32 {
            for lam in Partition::all(2 * d) {
                let a = ctx.plethysm(&lam, 2, d).unwrap();
                let expect = if lam.len() <= 2
                    && lam.part(1) % 2 == 0
                    && lam.part(0) >= lam.part(1)
                {
                    1
                } else {
                    0
                };
                assert_eq!(a, expect, "Sym^2(Sym^{d}) at {lam}");
            }
        }
    }

    #[test]
    fn plethysm_sym1_and_row() {
        let mut ctx = SymCtx::new();
        // Sym^1(Sym^delta) = Sym^delta
        for delta in 1..=6u32 {
            for lam in Partition::all(delta) {
                let a = ctx.plethysm(&lam, 1, delta).unwrap();
                assert_eq!(a, (lam == Partition::row(delta)) as u64);
            }
        }
        // a_{(nm)}(n,m) = 1 and hook a_{(nm-1,1)}(n,m) = 0
        for n in 1..=4u32 {
            for m in 1..=4u32 {
                assert_eq!(ctx.plethysm(&Partition::row(n * m), n, m).unwrap(), 1);
                if n * m >= 2 {
                    let hook = Partition::new(vec![n * m - 1, 1]);
                    assert_eq!(ctx.plethysm(&hook, n, m).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn plethysm_dimension_bookkeeping() {
        // sum_mu a_mu(d, delta) * dim S_mu(C^n) = dim Sym^d(Sym^delta(C^n))
        let mut ctx = SymCtx::new();
        for (d, delta, n) in [(2u32, 3u32, 2u32), (3, 2, 3), (2, 4, 3), (4, 2, 2)] {
            let table = ctx.plethysm_full(d, delta);
            let mut total = BigInt::zero();
            for (mu, c) in &table {
                total += BigInt::from(*c) * weyl_dimension(mu, n);
            }
            // dim Sym^delta(C^n) = C(n-1+delta, delta); dim Sym^d of that space
            let inner_dim = binom(n as u64 - 1 + delta as u64, delta as u64);
            let outer_dim = binom(inner_dim + d as u64 - 1, d as u64);
            assert_eq!(total, BigInt::from(outer_dim));
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn weyl_dims() {
        assert_eq!(weyl_dimension(&p(&[1]), 3), 3.into());
        assert_eq!(weyl_dimension(&p(&[2]), 3), 6.into());
        assert_eq!(weyl_dimension(&p(&[1, 1]), 3), 3.into());
        assert_eq!(weyl_dimension(&p(&[2, 1]), 3), 8.into());
    }
}
