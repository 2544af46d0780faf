use super::gad::gad_from_border;
use super::linalg;
use super::monomial::monomial_power_decomposition;
use super::types::WaringDecomposition;
use crate::error::{Error, Result};
use crate::polyring::{proportional, CycloScalar, LaurentScalar, LinearForm, Monomial, Poly};
use num::BigInt;

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k.min(n - k) {
        r = r * BigInt::from((n - i) as i64) / BigInt::from((i + 1) as i64);
    }
    r
}

/// Upper bound d * C(2r-2, r-1) on the summand count of the de-bordered
/// decomposition.
pub fn deborder_bound(d: u32, r: u32) -> BigInt {
    if r == 0 {
        return BigInt::from(0);
    }
    BigInt::from(d as i64) * binomial(2 * r - 2, r - 1)
}

/// Exact Waring decomposition of the limit of a border decomposition, with
/// at most `d * C(2r-2, r-1)` summands: convert to a generalized additive
/// decomposition, express each g_k in a spanning set of (r_k - 1)-th powers
/// of ε-free integer forms over its essential variables, and decompose each
/// `l_k^{d-r_k+1} L^{r_k-1}` by the binary-monomial identity after a change
/// of basis.
pub fn deborder_waring(dec: &WaringDecomposition) -> Result<WaringDecomposition> {
    let gad = gad_from_border(dec)?;
    let d = dec.d;
    let nvars = dec.nvars();
    let mut out_forms: Vec<LinearForm> = Vec::new();
    let mut out_scales: Vec<LaurentScalar> = Vec::new();
    for summand in &gad.summands {
        if summand.g.is_zero() {
            continue;
        }
        let r_k = summand.r_k;
        let a = d + 1 - r_k; // exponent on ell
        let order = num::integer::lcm(summand.g.order(), summand.ell.order());
        if r_k == 1 {
            // g is a nonzero constant
            let c = summand.g.coeff(&Monomial::one());
            out_forms.push(summand.ell.clone());
            out_scales.push(c);
            continue;
        }
        // essential-variable reduction for g: kernel directions v with
        // sum_i v_i * dg/dx_i = 0 span the unused directions
        let (ess_count, b_rows, b_inv) = essential_reduction(&summand.g, nvars, order)?;
        // h(y) = g(B y) depends on y_1..y_e only
        let b_map: Vec<LinearForm> = (0..nvars)
            .map(|i| {
                LinearForm::new(
                    (0..nvars)
                        .map(|j| LaurentScalar::from_cyclo(b_rows[i][j].clone()))
                        .collect(),
                )
            })
            .collect();
        let h = summand.g.embed(order)?.substitute_linear(&b_map)?;
        debug_assert!(h
            .terms()
            .all(|(m, _)| m.exponents().iter().skip(ess_count).all(|&e| e == 0)));
        // spanning powers of integer forms over the essential variables
        let (basis_forms, coeffs) = express_in_powers(&h, ess_count, r_k - 1, order)?;
        // ell in y-coordinates is not needed: we map the basis forms back to
        // x-coordinates and pair them with ell there.
        for (bf, c) in basis_forms.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            // back to x-coordinates: y = B^{-1} x acting on row vectors means
            // row <- row * B^{-1}
            let l_x = {
                let coeffs: Vec<LaurentScalar> = (0..nvars)
                    .map(|j| {
                        let mut acc = CycloScalar::zero(order);
                        for i in 0..ess_count {
                            let v = bf.coeff(i).as_cyclo().unwrap();
                            if !v.is_zero() {
                                acc = &acc + &(&v * &b_inv[i][j]);
                            }
                        }
                        LaurentScalar::from_cyclo(acc)
                    })
                    .collect();
                LinearForm::new(coeffs)
            };
            let scale = LaurentScalar::from_cyclo(c);
            append_two_form_product(
                &summand.ell,
                a,
                &l_x,
                r_k - 1,
                &scale,
                order,
                &mut out_forms,
                &mut out_scales,
            )?;
        }
    }
    let result = WaringDecomposition::new(d, out_forms, out_scales)?;
    debug_assert_eq!(result.expand(), dec.limit()?);
    Ok(result)
}

/// Kernel-based essential variable reduction: returns (e, B rows, B^{-1})
/// where x := B y makes the polynomial depend on y_1..y_e only.
fn essential_reduction(
    g: &Poly,
    nvars: usize,
    order: u32,
) -> Result<(usize, Vec<Vec<CycloScalar>>, Vec<Vec<CycloScalar>>)> {
    // matrix rows: coefficient vectors of dg/dx_i
    let partials: Vec<Poly> = (0..nvars).map(|i| g.partial(i)).collect();
    let mut monomials: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
    for p in &partials {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    let monomials: Vec<_> = monomials.into_iter().collect();
    let rows: Vec<Vec<CycloScalar>> = partials
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| p.coeff(m).as_cyclo().unwrap().embed(order).unwrap())
                .collect()
        })
        .collect();
    // essential columns: greedily select variables whose partials are
    // independent; kernel vectors give the complementary directions
    let mut selected: Vec<usize> = Vec::new();
    for i in 0..nvars {
        let mut cand: Vec<Vec<CycloScalar>> = selected.iter().map(|&j| rows[j].clone()).collect();
        cand.push(rows[i].clone());
        if linalg::rank(&cand, order) == cand.len() {
            selected.push(i);
        }
    }
    let e = selected.len();
    // columns of B: first e columns are the selected coordinate directions
    // adjusted so that non-selected partials cancel; simplest construction:
    // for each non-selected variable i, dg/dx_i = sum_j c_j dg/dx_{sel_j};
    // the direction e_i - sum_j c_j e_{sel_j} is then a kernel direction of
    // the gradient pairing only when the dependency is linear over constants,
    // which holds because the partials are linearly dependent polynomials.
    let mut b_cols: Vec<Vec<CycloScalar>> = Vec::with_capacity(nvars);
    for &s in &selected {
        let mut col = vec![CycloScalar::zero(order); nvars];
        col[s] = CycloScalar::one(order);
        b_cols.push(col);
    }
    for i in 0..nvars {
        if selected.contains(&i) {
            continue;
        }
        let cols: Vec<Vec<CycloScalar>> = selected.iter().map(|&j| rows[j].clone()).collect();
        let c = linalg::solve_columns(&cols, &rows[i], order).ok_or_else(|| {
            Error::ConstraintViolation("essential reduction solve failed".into())
        })?;
        let mut col = vec![CycloScalar::zero(order); nvars];
        col[i] = CycloScalar::one(order);
        for (j, &s) in selected.iter().enumerate() {
            col[s] = &col[s] - &c[j];
        }
        b_cols.push(col);
    }
    // B rows from columns
    let b_rows: Vec<Vec<CycloScalar>> = (0..nvars)
        .map(|r| (0..nvars).map(|c| b_cols[c][r].clone()).collect())
        .collect();
    let b_inv = linalg::invert(&b_rows, order)
        .ok_or_else(|| Error::ConstraintViolation("essential basis not invertible".into()))?;
    Ok((e, b_rows, b_inv))
}

/// Express a degree-k polynomial in e variables as a linear combination of
/// k-th powers of a deterministic family of integer-coefficient forms.
/// Returns the selected basis forms and the coefficients.
fn express_in_powers(
    h: &Poly,
    e: usize,
    k: u32,
    order: u32,
) -> Result<(Vec<LinearForm>, Vec<CycloScalar>)> {
    let dim = {
        // C(e - 1 + k, k)
        let mut r = BigInt::from(1);
        for i in 0..k {
            r = r * BigInt::from((e as u32 + i) as i64 - 0) / BigInt::from((i + 1) as i64);
        }
        // careful: C(e-1+k, k) = prod_{i=1..k} (e-1+i)/i
        let mut r2 = BigInt::from(1);
        for i in 1..=k {
            r2 = r2 * BigInt::from((e as u32 - 1 + i) as i64) / BigInt::from(i as i64);
        }
        let _ = r;
        usize::try_from(r2).unwrap()
    };
    // all degree-k monomials in e variables, fixed order
    let monomials = degree_monomials(e, k);
    assert_eq!(monomials.len(), dim);
    let mut basis: Vec<LinearForm> = Vec::new();
    let mut cols: Vec<Vec<CycloScalar>> = Vec::new();
    let mut attempt_range = 1i64;
    'outer: while basis.len() < dim {
        // enumerate integer vectors in {-range..=range}^e lexicographically
        let range = attempt_range;
        let mut vec_iter = IntVectors::new(e, range);
        while let Some(v) = vec_iter.next_vec() {
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            // skip scalar multiples: require first nonzero entry positive
            let first = v.iter().find(|&&c| c != 0).unwrap();
            if *first < 0 {
                continue;
            }
            let form = LinearForm::new(
                v.iter()
                    .map(|&c| LaurentScalar::from_int(order, c))
                    .collect(),
            );
            if basis.iter().any(|b| proportional(b, &form)) {
                continue;
            }
            let col = power_coeff_vector(&form, k, &monomials, order);
            let mut cand = cols.clone();
            cand.push(col.clone());
            if matrix_rank_cols(&cand, order) == cand.len() {
                basis.push(form);
                cols.push(col);
                if basis.len() == dim {
                    break 'outer;
                }
            }
        }
        attempt_range += 1;
        if attempt_range > range.max(3) + 2 {
            return Err(Error::SpanningSetFailure {
                rank: basis.len(),
                dim,
            });
        }
    }
    // solve for the coefficients of h
    let target: Vec<CycloScalar> = monomials
        .iter()
        .map(|m| h.coeff(m).as_cyclo().unwrap().embed(order).unwrap())
        .collect();
    let coeffs = linalg::solve_columns(&cols, &target, order)
        .ok_or_else(|| Error::ConstraintViolation("power basis solve failed".into()))?;
    Ok((basis, coeffs))
}

fn degree_monomials(e: usize, k: u32) -> Vec<Monomial> {
    fn rec(e: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == e {
            if left == 0 {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(e, pos + 1, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, 0, k, &mut Vec::new(), &mut out);
    out
}

fn power_coeff_vector(
    form: &LinearForm,
    k: u32,
    monomials: &[Monomial],
    order: u32,
) -> Vec<CycloScalar> {
    let p = form.to_poly_n(order, form.nvars()).pow(k);
    monomials
        .iter()
        .map(|m| p.coeff(m).as_cyclo().unwrap())
        .collect()
}

fn matrix_rank_cols(cols: &[Vec<CycloScalar>], order: u32) -> usize {
    let nrows = cols.iter().map(|c| c.len()).max().unwrap_or(0);
    let rows: Vec<Vec<CycloScalar>> = (0..nrows)
        .map(|r| {
            cols.iter()
                .map(|c| c.get(r).cloned().unwrap_or_else(|| CycloScalar::zero(order)))
                .collect()
        })
        .collect();
    linalg::rank(&rows, order)
}

struct IntVectors {
    e: usize,
    range: i64,
    state: Option<Vec<i64>>,
}

impl IntVectors {
    fn new(e: usize, range: i64) -> Self {
        IntVectors {
            e,
            range,
            state: Some(vec![-range; e]),
        }
    }

    fn next_vec(&mut self) -> Option<Vec<i64>> {
        let cur = self.state.clone()?;
        // advance odometer
        let mut next = cur.clone();
        let mut i = self.e;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if next[i] < self.range {
                next[i] += 1;
                for v in next.iter_mut().skip(i + 1) {
                    *v = -self.range;
                }
                self.state = Some(next);
                break;
            }
        }
        Some(cur)
    }
}

/// Append the exact Waring decomposition of `scale * u^a v^b` (u, v ε-free
/// forms) to the output lists.
#[allow(clippy::too_many_arguments)]
fn append_two_form_product(
    u: &LinearForm,
    a: u32,
    v: &LinearForm,
    b: u32,
    scale: &LaurentScalar,
    order: u32,
    out_forms: &mut Vec<LinearForm>,
    out_scales: &mut Vec<LaurentScalar>,
) -> Result<()> {
    if b == 0 {
        out_forms.push(u.clone());
        out_scales.push(scale.clone());
        return Ok(());
    }
    if proportional(u, v) {
        // v = c u: term = scale * c^b * u^{a+b}
        let (i, cu) = u
            .coeffs()
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .ok_or(Error::ZeroForm)?;
        let cv = v.coeff(i);
        let ratio = &cv * &cu.inverse_monomial().ok_or(Error::ZeroForm)?;
        let mut s = scale.clone();
        for _ in 0..b {
            s = &s * &ratio;
        }
        out_forms.push(u.clone());
        out_scales.push(s);
        return Ok(());
    }
    let dec = monomial_power_decomposition(a, b)?;
    let big_order = num::integer::lcm(order, dec.order());
    for (f, s) in dec.forms.iter().zip(&dec.scales) {
        // substitute y1 -> u, y2 -> v
        let c1 = f.coeff(0).embed(big_order).unwrap();
        let c2 = f.coeff(1).embed(big_order).unwrap();
        let uf = u.embed(big_order)?.scale(&c1);
        let vf = v.embed(big_order)?.scale(&c2);
        out_forms.push(uf.add(&vf));
        out_scales.push(&s.embed(big_order).unwrap() * &scale.embed(big_order).unwrap());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn var(i: usize, n: usize) -> LinearForm {
        LinearForm::var(1, n, i)
    }

    #[test]
    fn single_power_is_itself() {
        let dec = WaringDecomposition::new(
            4,
            vec![var(0, 2).add(&var(1, 2))],
            vec![LaurentScalar::one(1)],
        )
        .unwrap();
        let out = deborder_waring(&dec).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.expand(), dec.expand());
    }

    #[test]
    fn rank_two_monomial_border() {
        // border decomposition of x^{d-1} y with r = 2
        for d in [3u32, 4, 5] {
            let n = 2;
            let e = LaurentScalar::eps_pow(1, 1);
            let x = var(0, n);
            let y = var(1, n);
            let sc = |num: i64| {
                LaurentScalar::monomial(CycloScalar::from_rational(1, rat(num, d as i64)), -1)
            };
            let dec = WaringDecomposition::new(
                d,
                vec![x.add(&y.scale(&e)), x.clone()],
                vec![sc(1), sc(-1)],
            )
            .unwrap();
            let out = deborder_waring(&dec).unwrap();
            assert!(!out.is_border());
            assert_eq!(out.expand(), dec.limit().unwrap());
            assert!(
                BigInt::from(out.len() as i64) <= deborder_bound(d, 2),
                "bound violated at d={d}"
            );
        }
    }

    #[test]
    fn paper_example_debordered() {
        // eq.-(2.1)-style input at d = 5, r = 6
        let d = 5u32;
        let n = 5;
        let e = LaurentScalar::eps_pow(1, 1);
        let x0 = var(0, n);
        let x1 = var(1, n);
        let x01 = x0.add(&x1);
        let sc = |num: i64| {
            LaurentScalar::monomial(CycloScalar::from_rational(1, rat(num, d as i64)), -1)
        };
        let dec = WaringDecomposition::new(
            d,
            vec![
                x0.add(&var(2, n).scale(&e)),
                x0.clone(),
                x1.add(&var(3, n).scale(&e)),
                x1.clone(),
                x01.add(&var(4, n).scale(&e)),
                x01.clone(),
            ],
            vec![sc(1), sc(-1), sc(1), sc(-1), sc(2), sc(-2)],
        )
        .unwrap();
        let out = deborder_waring(&dec).unwrap();
        assert!(!out.is_border());
        assert_eq!(out.expand(), dec.limit().unwrap());
        assert!(BigInt::from(out.len() as i64) <= deborder_bound(d, 6));
    }
}
