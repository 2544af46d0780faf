use super::linalg;
use super::newton::elementary_symmetric;
use super::types::{SigmaLambdaSigma, SlsSummand};
use crate::error::{Error, Result};
use crate::polyring::{
    proportional, CycloScalar, LaurentScalar, LinearForm, Poly, Rational,
};
use num::BigInt;

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k.min(n - k) {
        r = r * BigInt::from((n - i) as i64) / BigInt::from((i + 1) as i64);
    }
    r
}

/// Degreewise extraction of a two-products border expression: given linear
/// forms a_i, b_i over C[[ε]] with
/// `f = lim eps^{-M} (alpha prod(1 + eps a_i) - beta prod(1 + eps b_i))`
/// and `alpha ≃ beta ≄ 0` (or alpha = beta = 1), produce a sum of powers of
/// affine forms with at most 2md (+1 in the scaled case) summands and
/// exponents at most d, built from
/// `f_j ≃ eps^{-M+j} (1/j) (-1)^{j-1} (p_j(a) - p_j(b))`.
pub fn two_product_border_extract(
    a_forms: &[LinearForm],
    b_forms: &[LinearForm],
    m_exp: i64,
    alpha: &LaurentScalar,
    beta: &LaurentScalar,
    d: u32,
) -> Result<SigmaLambdaSigma> {
    if a_forms.len() != b_forms.len() {
        return Err(Error::ArityMismatch {
            expected: a_forms.len(),
            got: b_forms.len(),
        });
    }
    if m_exp < 1 {
        return Err(Error::ConstraintViolation("M must be at least 1".into()));
    }
    for f in a_forms.iter().chain(b_forms) {
        if let Some(q) = f.min_eps_order() {
            if q < 0 {
                return Err(Error::ConstraintViolation(
                    "forms must lie in C[[eps]] (no poles)".into(),
                ));
            }
        }
    }
    let order = a_forms
        .iter()
        .chain(b_forms)
        .map(|f| f.order())
        .fold(num::integer::lcm(alpha.order(), beta.order()), num::integer::lcm);
    let m = a_forms.len();
    let alpha0 = alpha.limit().map_err(|_| Error::ZeroAlpha)?;
    let beta0 = beta.limit().map_err(|_| Error::ZeroAlpha)?;
    if alpha0.is_zero() || alpha0 != beta0 {
        return Err(Error::ConstraintViolation(
            "alpha and beta must have equal nonzero limits".into(),
        ));
    }
    // congruence checks e_j(a) = e_j(b) mod eps^{M-j}
    for j in 1..=(m.min(m_exp as usize - 1)) {
        let diff = elementary_symmetric(a_forms, j).sub(&elementary_symmetric(b_forms, j));
        if let Some(q) = diff.min_eps_order() {
            if q < m_exp - j as i64 {
                return Err(Error::CongruenceViolation {
                    j,
                    modulus: m_exp - j as i64,
                });
            }
        }
    }
    let mut summands = Vec::new();
    // degree-0 contribution (scaled case): lim eps^{-M}(alpha - beta)
    let c0 = (&(alpha - beta) * &LaurentScalar::eps_pow(order, -m_exp)).limit()?;
    if !c0.is_zero() {
        summands.push(SlsSummand {
            scale: LaurentScalar::from_cyclo(c0),
            affine_const: LaurentScalar::one(order),
            form: LinearForm::zero(order, 0),
            exponent: 0,
        });
    }
    let alpha0 = LaurentScalar::from_cyclo(alpha0.embed(order).unwrap());
    for j in 1..=d {
        let sign = if (j - 1) % 2 == 0 { 1 } else { -1 };
        let base = LaurentScalar::monomial(
            CycloScalar::from_rational(order, Rational::new(sign.into(), (j as i64).into())),
            -m_exp + j as i64,
        );
        let base = &base * &alpha0;
        for f in a_forms {
            if !f.is_zero() {
                summands.push(SlsSummand {
                    scale: base.clone(),
                    affine_const: LaurentScalar::zero(order),
                    form: f.embed(order)?,
                    exponent: j,
                });
            }
        }
        for f in b_forms {
            if !f.is_zero() {
                summands.push(SlsSummand {
                    scale: -&base,
                    affine_const: LaurentScalar::zero(order),
                    form: f.embed(order)?,
                    exponent: j,
                });
            }
        }
    }
    SigmaLambdaSigma::new(summands, 2 * m * d as usize + 1, d)
}

/// Reassemble a decomposition of f from per-slice decompositions of
/// `f(gamma_i, x_2, …)` using Lagrange interpolation in the substituted
/// variable and the border-monomial construction for the products
/// `x^j * (affine)^e`.
pub fn interpolate_decompositions(
    slices: &[(LaurentScalar, SigmaLambdaSigma)],
    var: usize,
    d: u32,
) -> Result<SigmaLambdaSigma> {
    if slices.len() < d as usize + 1 {
        return Err(Error::ConstraintViolation(format!(
            "need at least {} slices, got {}",
            d + 1,
            slices.len()
        )));
    }
    let used = &slices[..=d as usize];
    let order = used
        .iter()
        .map(|(g, dec)| num::integer::lcm(g.order(), dec.order()))
        .fold(1, num::integer::lcm);
    // nodes must be distinct ε-free scalars
    let nodes: Vec<CycloScalar> = used
        .iter()
        .map(|(g, _)| {
            g.as_cyclo()
                .ok_or_else(|| Error::ConstraintViolation("nodes must be eps-free".into()))
                .map(|c| c.embed(order).unwrap())
        })
        .collect::<Result<_>>()?;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    // inverse Vandermonde: a[j][i] with f_j = sum_i a[j][i] f(gamma_i)
    let vrows: Vec<Vec<CycloScalar>> = nodes
        .iter()
        .map(|g| (0..=d).map(|j| g.pow(j)).collect())
        .collect();
    let vinv = linalg::invert(&vrows, order)
        .ok_or_else(|| Error::ConstraintViolation("Vandermonde not invertible".into()))?;
    let mut summands: Vec<SlsSummand> = Vec::new();
    let mut max_exp = 0u32;
    for j in 0..=d as usize {
        for (i, (_, dec)) in used.iter().enumerate() {
            let lag = &vinv[j][i];
            if lag.is_zero() {
                continue;
            }
            let lag = LaurentScalar::from_cyclo(lag.clone());
            for s in &dec.summands {
                let scale = &s.scale.embed(order)? * &lag;
                if j == 0 {
                    summands.push(SlsSummand {
                        scale,
                        affine_const: s.affine_const.embed(order)?,
                        form: s.form.embed(order)?,
                        exponent: s.exponent,
                    });
                    max_exp = max_exp.max(s.exponent);
                    continue;
                }
                // decompose x_var^j * (const + form)^e via finite differences
                let e = s.exponent;
                let j32 = j as u32;
                let mut fact = BigInt::from(1);
                for t in 2..=j as i64 {
                    fact *= BigInt::from(t);
                }
                let norm = Rational::new(BigInt::from(1), binomial(j32 + e, j32) * fact);
                // fresh-epsilon exponent: large enough that all discarded
                // terms still vanish against the scale's pole depth
                let pole = scale
                    .min_exponent()
                    .unwrap_or(0)
                    .min(s.affine_const.embed(order)?.min_exponent().unwrap_or(0))
                    .min(s.form.min_eps_order().unwrap_or(0))
                    .min(0);
                let k_exp = 1 + (e as i64 + 1) * (-pole) + 1;
                for t in 0..=j32 {
                    let sign = if (j32 - t) % 2 == 0 { 1 } else { -1 };
                    let w = Rational::from(binomial(j32, t) * BigInt::from(sign)) * &norm;
                    let mut form = s.form.embed(order)?;
                    // + t * eps^k * x_var
                    let extra = LaurentScalar::monomial(
                        CycloScalar::from_int(order, t as i64),
                        k_exp,
                    );
                    let mut coeffs: Vec<LaurentScalar> = (0..form.nvars().max(var + 1))
                        .map(|idx| form.coeff(idx))
                        .collect();
                    coeffs[var] = &coeffs[var] + &extra;
                    form = LinearForm::new(coeffs);
                    summands.push(SlsSummand {
                        scale: (&scale
                            * &LaurentScalar::eps_pow(order, -k_exp * j as i64))
                            .scale_rat(&w),
                        affine_const: s.affine_const.embed(order)?,
                        form,
                        exponent: e + j32,
                    });
                    max_exp = max_exp.max(e + j32);
                }
            }
        }
    }
    let count = summands.len();
    SigmaLambdaSigma::new(summands, count.max(1), max_exp)
}

/// Result of de-bordering a restricted binomial.
#[derive(Clone, Debug)]
pub enum RbDeborder {
    /// Both products converge individually: an exact RB_k presentation,
    /// each side present when its product does not tend to zero.
    ExactRb {
        factors: Option<Vec<LinearForm>>,
        restricted_factors: Option<Vec<LinearForm>>,
    },
    /// A border sum-of-powers decomposition whose limit equals the input.
    Border(SigmaLambdaSigma),
}

impl RbDeborder {
    pub fn limit(&self, nvars: usize, order: u32) -> Result<Poly> {
        match self {
            RbDeborder::ExactRb {
                factors,
                restricted_factors,
            } => {
                let mut acc = Poly::zero(order, nvars);
                for fs in [factors, restricted_factors].into_iter().flatten() {
                    let mut prod = Poly::one(order, nvars);
                    for f in fs {
                        prod = prod.mul(&f.to_poly_n(order, nvars));
                    }
                    acc = acc.add(&prod);
                }
                Ok(acc)
            }
            RbDeborder::Border(s) => s.limit(),
        }
    }
}

/// De-border `lim (prod l_i + prod l'_i)` where the second family spans at
/// most k dimensions for generic ε. Either both products converge
/// individually (exact RB_k), or the lowest-order factors match up to unit
/// and permutation, a change of variables moves the span to the first r
/// coordinates, a grid of two-product extractions is computed and
/// interpolated back.
pub fn rb_deborder(lf: &[LinearForm], lfr: &[LinearForm], k: usize) -> Result<RbDeborder> {
    if lf.len() != lfr.len() {
        return Err(Error::ArityMismatch {
            expected: lf.len(),
            got: lfr.len(),
        });
    }
    let d = lf.len() as u32;
    let order = lf
        .iter()
        .chain(lfr)
        .map(|f| f.order())
        .fold(1, num::integer::lcm);
    let nvars = lf
        .iter()
        .chain(lfr)
        .map(|f| f.nvars())
        .max()
        .unwrap_or(0);
    // rank of the restricted family at generic eps, via (k+1)-minors over
    // the Laurent ring
    if laurent_rank_exceeds(lfr, k, order, nvars) {
        return Err(Error::RankViolation {
            rank: k + 1,
            bound: k,
        });
    }
    // factor out eps powers
    let split = |fs: &[LinearForm]| -> Result<(i64, Vec<LinearForm>)> {
        let mut total = 0i64;
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            let (q, _) = f.lowest_order_form().ok_or(Error::ZeroForm)?;
            total += q;
            out.push(f.scale(&LaurentScalar::eps_pow(order, -q)));
        }
        Ok((total, out))
    };
    let (p, lt) = split(lf)?;
    let (p2, lt2) = split(lfr)?;
    if p >= 0 && p2 >= 0 {
        let factors = (p == 0).then(|| lt.iter().map(|f| f.eps_coefficient(0)).collect());
        let restricted = (p2 == 0).then(|| lt2.iter().map(|f| f.eps_coefficient(0)).collect());
        return Ok(RbDeborder::ExactRb {
            factors,
            restricted_factors: restricted,
        });
    }
    if p != p2 {
        // the more negative side has a nonzero product of lowest forms that
        // nothing can cancel
        return Err(Error::FactorMatchFailure);
    }
    let m_exp = -p;
    // match lowest-order factors up to permutation and scale
    let low1: Vec<LinearForm> = lt.iter().map(|f| f.eps_coefficient(0)).collect();
    let low2: Vec<LinearForm> = lt2.iter().map(|f| f.eps_coefficient(0)).collect();
    let mut used = vec![false; low2.len()];
    let mut matched: Vec<LinearForm> = Vec::with_capacity(lt2.len());
    let mut scale_prod = CycloScalar::one(order);
    for l1 in &low1 {
        let mut found = None;
        for (j, l2) in low2.iter().enumerate() {
            if used[j] || !proportional(l1, l2) {
                continue;
            }
            found = Some(j);
            break;
        }
        let Some(j) = found else {
            return Err(Error::FactorMatchFailure);
        };
        used[j] = true;
        // c with low2[j] = c * l1
        let idx = (0..nvars)
            .find(|&i| !l1.coeff(i).is_zero())
            .ok_or(Error::ZeroForm)?;
        let c = &low2[j].coeff(idx).as_cyclo().unwrap()
            * &l1.coeff(idx).as_cyclo().unwrap().inverse().unwrap();
        scale_prod = &scale_prod * &c;
        matched.push(
            lt2[j].scale(&LaurentScalar::from_cyclo(c.inverse().unwrap())),
        );
    }
    // after rescaling, prod lt2 = scale_prod * prod matched; cancellation of
    // the lowest terms requires prod low1 = -(prod low2), i.e. scale_prod = -1
    if scale_prod != CycloScalar::from_int(order, -1) {
        return Err(Error::FactorMatchFailure);
    }
    // now f ≃ eps^{-M}(prod lt - prod matched) with matched_i(0) = low1_i
    let r = {
        let rows: Vec<Vec<CycloScalar>> = low1
            .iter()
            .map(|f| {
                (0..nvars)
                    .map(|i| f.coeff(i).as_cyclo().unwrap().embed(order).unwrap())
                    .collect()
            })
            .collect();
        linalg::rank(&rows, order)
    };
    // change of variables sending the first r independent lowest forms to
    // coordinates
    let mut basis_rows: Vec<Vec<CycloScalar>> = Vec::new();
    for f in &low1 {
        let row: Vec<CycloScalar> = (0..nvars)
            .map(|i| f.coeff(i).as_cyclo().unwrap().embed(order).unwrap())
            .collect();
        let mut cand = basis_rows.clone();
        cand.push(row.clone());
        if linalg::rank(&cand, order) == cand.len() {
            basis_rows.push(row);
        }
        if basis_rows.len() == r {
            break;
        }
    }
    let c_rows = linalg::complete_basis(&basis_rows, nvars, order);
    let b_mat = linalg::invert(&c_rows, order).unwrap();
    let to_y = |f: &LinearForm| -> LinearForm {
        LinearForm::new(
            (0..nvars)
                .map(|j| {
                    let mut acc = LaurentScalar::zero(order);
                    for i in 0..nvars {
                        let c = f.coeff(i);
                        if !c.is_zero() {
                            acc = &acc + &(&c * &LaurentScalar::from_cyclo(b_mat[i][j].clone()));
                        }
                    }
                    acc
                })
                .collect(),
        )
    };
    let ly: Vec<LinearForm> = lt.iter().map(|f| to_y(&f.embed(order).unwrap())).collect();
    let lpy: Vec<LinearForm> = matched
        .iter()
        .map(|f| to_y(&f.embed(order).unwrap()))
        .collect();
    // integer grids per restricted coordinate avoiding zeros of the lowest
    // forms on every combination
    let low_y: Vec<LinearForm> = ly.iter().map(|f| f.eps_coefficient(0)).collect();
    let grid = choose_grid(&low_y, r, d as usize + 1, order)?;
    // recursively: restrict coordinates 0..r on the grid, extract, interpolate
    let cut = m_exp + d as i64 + 2;
    let result = grid_extract(
        &ly, &lpy, &grid, 0, r, m_exp, d, order, nvars, cut,
    )?;
    // back to x-coordinates: substitute y = C x in every form
    let c_map: Vec<LinearForm> = c_rows
        .iter()
        .map(|row| {
            LinearForm::new(
                row.iter()
                    .map(|c| LaurentScalar::from_cyclo(c.clone()))
                    .collect(),
            )
        })
        .collect();
    let summands = result
        .summands
        .iter()
        .map(|s| {
            // the reserved constant slot is zero in final summands; trim it
            debug_assert!(s.form.coeff(nvars).is_zero());
            let trimmed = LinearForm::new((0..nvars).map(|i| s.form.coeff(i)).collect());
            let fp = trimmed.to_poly_n(order, nvars).substitute_linear(&c_map)?;
            let mut coeffs = vec![LaurentScalar::zero(order); nvars];
            for (m, c) in fp.terms() {
                let idx = m
                    .exponents()
                    .iter()
                    .position(|&e| e == 1)
                    .expect("linear");
                coeffs[idx] = c.clone();
            }
            Ok(SlsSummand {
                scale: s.scale.clone(),
                affine_const: s.affine_const.clone(),
                form: LinearForm::new(coeffs),
                exponent: s.exponent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = summands.len();
    let e = summands.iter().map(|s| s.exponent).max().unwrap_or(0);
    Ok(RbDeborder::Border(SigmaLambdaSigma::new(summands, n.max(1), e)?))
}

fn laurent_rank_exceeds(forms: &[LinearForm], k: usize, order: u32, nvars: usize) -> bool {
    if forms.len() <= k {
        return false;
    }
    // rank > k iff some (k+1)x(k+1) minor over Q(zeta)[eps^{±}] is nonzero
    let rows: Vec<Vec<LaurentScalar>> = forms
        .iter()
        .map(|f| {
            (0..nvars)
                .map(|i| f.coeff(i).embed(order).unwrap())
                .collect()
        })
        .collect();
    let mut row_sets = Vec::new();
    combinations(forms.len(), k + 1, &mut row_sets);
    let mut col_sets = Vec::new();
    combinations(nvars, k + 1, &mut col_sets);
    for rs in &row_sets {
        for cs in &col_sets {
            if !laurent_minor(&rows, rs, cs, order).is_zero() {
                return true;
            }
        }
    }
    false
}

fn combinations(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::new(), out);
    }
}

fn laurent_minor(
    rows: &[Vec<LaurentScalar>],
    rs: &[usize],
    cs: &[usize],
    order: u32,
) -> LaurentScalar {
    let k = rs.len();
    fn det(m: &[Vec<LaurentScalar>], order: u32) -> LaurentScalar {
        let k = m.len();
        if k == 0 {
            return LaurentScalar::one(order);
        }
        if k == 1 {
            return m[0][0].clone();
        }
        let mut acc = LaurentScalar::zero(order);
        for j in 0..k {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<LaurentScalar>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &det(&minor, order);
            if j % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        acc
    }
    let sub: Vec<Vec<LaurentScalar>> = rs
        .iter()
        .map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect())
        .collect();
    let _ = k;
    det(&sub, order)
}

/// Integer grid values per restricted coordinate such that no lowest-order
/// form vanishes on any grid combination.
fn choose_grid(
    low_forms: &[LinearForm],
    r: usize,
    points: usize,
    order: u32,
) -> Result<Vec<Vec<CycloScalar>>> {
    let mut grid: Vec<Vec<CycloScalar>> = Vec::with_capacity(r);
    for _ in 0..r {
        grid.push(Vec::new());
    }
    // candidate values 0,1,2,… per coordinate; on a vanishing combination,
    // shift every coordinate window and retry
    'outer: for attempt in 0..100i64 {
        for (c, slot) in grid.iter_mut().enumerate() {
            let offset = attempt * points as i64 * (c as i64 + 1);
            *slot = (0..points as i64)
                .map(|v| CycloScalar::from_int(order, v + offset))
                .collect();
        }
        // verify every combination keeps every form nonzero
        let mut combo = vec![0usize; r];
        loop {
            let point: Vec<CycloScalar> = (0..r).map(|c| grid[c][combo[c]].clone()).collect();
            for f in low_forms {
                let mut v = CycloScalar::zero(order);
                for (i, p) in point.iter().enumerate() {
                    let c = f.coeff(i).as_cyclo().unwrap();
                    if !c.is_zero() {
                        v = &v + &(&c * p);
                    }
                }
                if v.is_zero() {
                    continue 'outer;
                }
            }
            // advance combo
            let mut idx = 0;
            loop {
                if idx == r {
                    return Ok(grid);
                }
                combo[idx] += 1;
                if combo[idx] < points {
                    break;
                }
                combo[idx] = 0;
                idx += 1;
            }
        }
    }
    Err(Error::ConstraintViolation(
        "could not find a nonvanishing grid".into(),
    ))
}

/// Restrict coordinates `coord..r` over the grid, extract at full restriction
/// and interpolate back one coordinate at a time.
#[allow(clippy::too_many_arguments)]
fn grid_extract(
    a_forms: &[LinearForm],
    b_forms: &[LinearForm],
    grid: &[Vec<CycloScalar>],
    coord: usize,
    r: usize,
    m_exp: i64,
    d: u32,
    order: u32,
    nvars: usize,
    cut: i64,
) -> Result<SigmaLambdaSigma> {
    if coord == r {
        // fully restricted: affine split L_i = alpha_i + eps * a_i
        let mut alpha = LaurentScalar::one(order);
        let mut beta = LaurentScalar::one(order);
        let mut av = Vec::with_capacity(a_forms.len());
        let mut bv = Vec::with_capacity(b_forms.len());
        for f in a_forms {
            let (ai, resti) = affine_split(f, order, cut)?;
            alpha = (&alpha * &ai).truncate(cut);
            av.push(resti);
        }
        for f in b_forms {
            let (bi, resti) = affine_split(f, order, cut)?;
            beta = (&beta * &bi).truncate(cut);
            bv.push(resti);
        }
        return two_product_border_extract(&av, &bv, m_exp, &alpha, &beta, d);
    }
    let mut slices = Vec::with_capacity(grid[coord].len());
    for value in &grid[coord] {
        let v = LaurentScalar::from_cyclo(value.clone());
        // substitute the coordinate by the grid value; the freed constant is
        // carried in a reserved slot at index nvars that affine_split reads
        let fix = |fs: &[LinearForm]| -> Vec<(LaurentScalar, LinearForm)> {
            fs.iter()
                .map(|f| {
                    let c = f.coeff(coord);
                    let constant = &c * &v;
                    // keep the reserved constant slot at index nvars intact
                    let mut coeffs: Vec<LaurentScalar> =
                        (0..nvars + 1).map(|i| f.coeff(i)).collect();
                    coeffs[coord] = LaurentScalar::zero(order);
                    (constant, LinearForm::new(coeffs))
                })
                .collect()
        };
        let af = fix(a_forms);
        let bf = fix(b_forms);
        let attach = |pairs: Vec<(LaurentScalar, LinearForm)>| -> Vec<LinearForm> {
            pairs
                .into_iter()
                .map(|(c, f)| {
                    let mut coeffs: Vec<LaurentScalar> =
                        (0..nvars + 1).map(|i| f.coeff(i)).collect();
                    coeffs[nvars] = &coeffs[nvars] + &c;
                    LinearForm::new(coeffs)
                })
                .collect()
        };
        let af = attach(af);
        let bf = attach(bf);
        let dec = grid_extract(&af, &bf, grid, coord + 1, r, m_exp, d, order, nvars, cut)?;
        slices.push((LaurentScalar::from_cyclo(value.clone()), dec));
    }
    interpolate_decompositions(&slices, coord, d)
}

/// Split an affine form carried as a linear form with the constant stored at
/// the reserved last slot: L = alpha + eps * a with alpha a unit series; the
/// returned `a` has the constant part folded into its own reserved slot.
fn affine_split(f: &LinearForm, order: u32, cut: i64) -> Result<(LaurentScalar, LinearForm)> {
    let nv = f.nvars();
    let constant = f.coeff(nv.saturating_sub(1));
    let alpha = constant;
    if alpha.is_zero() || alpha.min_exponent() != Some(0) {
        return Err(Error::ConstraintViolation(
            "restricted form has no unit constant part".into(),
        ));
    }
    let alpha_inv = alpha
        .inverse_series(cut)
        .ok_or_else(|| Error::ConstraintViolation("constant part not invertible".into()))?;
    let eps_inv = LaurentScalar::eps_pow(order, -1);
    let mut coeffs: Vec<LaurentScalar> = Vec::with_capacity(nv);
    for i in 0..nv - 1 {
        let c = f.coeff(i);
        if c.is_zero() {
            coeffs.push(c);
            continue;
        }
        if c.min_exponent().unwrap_or(0) < 1 {
            return Err(Error::ConstraintViolation(
                "non-constant part must vanish at eps = 0".into(),
            ));
        }
        coeffs.push((&(&c * &alpha_inv) * &eps_inv).truncate(cut));
    }
    coeffs.push(LaurentScalar::zero(order));
    Ok((alpha, LinearForm::new(coeffs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(i: usize, n: usize) -> LinearForm {
        LinearForm::var(1, n, i)
    }

    #[test]
    fn two_product_zero_difference() {
        let a = vec![var(0, 2), var(1, 2)];
        let one = LaurentScalar::one(1);
        let dec = two_product_border_extract(&a, &a, 1, &one, &one, 2).unwrap();
        assert!(dec.limit().unwrap().is_zero());
    }

    #[test]
    fn two_product_basic_extraction() {
        // a = (x, y), b = (x, y + eps z), M = 1:
        // f = lim eps^{-1}[(1+eps x)(1+eps y) - (1+eps x)(1+eps y+eps^2 z)]
        let n = 3;
        let x = var(0, n);
        let y = var(1, n);
        let z = var(2, n);
        let e = LaurentScalar::eps_pow(1, 1);
        let a = vec![x.clone(), y.clone()];
        let b = vec![x.clone(), y.add(&z.scale(&e))];
        let one = LaurentScalar::one(1);
        let dec = two_product_border_extract(&a, &b, 1, &one, &one, 2).unwrap();
        // direct expansion of the defining expression
        let onep = Poly::one(1, n);
        let lift = |fs: &[LinearForm]| {
            fs.iter().fold(onep.clone(), |acc, f| {
                acc.mul(&onep.add(&f.to_poly_n(1, n).scale(&e)))
            })
        };
        let f = lift(&a)
            .sub(&lift(&b))
            .scale(&LaurentScalar::eps_pow(1, -1))
            .limit()
            .unwrap();
        assert_eq!(dec.limit().unwrap(), f);
        assert!(dec.summands.len() <= 2 * 2 * 2 + 1);
    }

    #[test]
    fn two_product_scaled_case() {
        // alpha = 1 + eps, beta = 1, a = b: only the degree-0 part remains
        let a = vec![var(0, 1)];
        let alpha = &LaurentScalar::one(1) + &LaurentScalar::eps_pow(1, 1);
        let beta = LaurentScalar::one(1);
        let dec = two_product_border_extract(&a, &a, 1, &alpha, &beta, 1).unwrap();
        // f = lim eps^{-1}[(1+eps)(1+eps x) - (1+eps x)] = 1
        let lim = dec.limit().unwrap();
        assert_eq!(lim, Poly::one(1, 1));
    }

    #[test]
    fn interpolation_reassembles_bilinear() {
        // f = x0 * x1: slices at gamma in {0, 1}: f(gamma, x1) = gamma x1
        let n = 2;
        let mk_slice = |gamma: i64| {
            let summands = if gamma == 0 {
                vec![]
            } else {
                vec![SlsSummand {
                    scale: LaurentScalar::from_int(1, gamma),
                    affine_const: LaurentScalar::zero(1),
                    form: var(1, n),
                    exponent: 1,
                }]
            };
            SigmaLambdaSigma::new(summands, 1, 1).unwrap()
        };
        let slices = vec![
            (LaurentScalar::from_int(1, 0), mk_slice(0)),
            (LaurentScalar::from_int(1, 1), mk_slice(1)),
        ];
        let dec = interpolate_decompositions(&slices, 0, 1).unwrap();
        let f = Poly::var(1, n, 0).mul(&Poly::var(1, n, 1));
        assert_eq!(dec.limit().unwrap(), f);
    }

    #[test]
    fn interpolation_quadratic() {
        // f = x0^2 + x1^2 with 3 nodes
        let n = 2;
        let mk_slice = |gamma: i64| {
            let mut summands = vec![SlsSummand {
                scale: LaurentScalar::one(1),
                affine_const: LaurentScalar::zero(1),
                form: var(1, n),
                exponent: 2,
            }];
            if gamma != 0 {
                summands.push(SlsSummand {
                    scale: LaurentScalar::from_int(1, gamma * gamma),
                    affine_const: LaurentScalar::one(1),
                    form: LinearForm::zero(1, n),
                    exponent: 0,
                });
            }
            SigmaLambdaSigma::new(summands, 2, 2).unwrap()
        };
        let slices: Vec<_> = (0..3)
            .map(|g| (LaurentScalar::from_int(1, g), mk_slice(g)))
            .collect();
        let dec = interpolate_decompositions(&slices, 0, 2).unwrap();
        let f = Poly::var(1, n, 0).pow(2).add(&Poly::var(1, n, 1).pow(2));
        assert_eq!(dec.limit().unwrap(), f);
    }

    #[test]
    fn exact_rb_cases() {
        let n = 2;
        let lf = vec![var(0, n), var(1, n)];
        let lfr = vec![var(0, n), var(0, n)];
        match rb_deborder(&lf, &lfr, 1).unwrap() {
            RbDeborder::ExactRb {
                factors,
                restricted_factors,
            } => {
                assert!(factors.is_some());
                assert!(restricted_factors.is_some());
            }
            other => panic!("expected exact, got {other:?}"),
        }
        // both products tending to zero individually
        let e = LaurentScalar::eps_pow(1, 1);
        let lfz = vec![var(0, n).scale(&e), var(1, n)];
        let lfrz = vec![var(0, n).scale(&e), var(0, n)];
        match rb_deborder(&lfz, &lfrz, 1).unwrap() {
            RbDeborder::ExactRb {
                factors,
                restricted_factors,
            } => {
                assert!(factors.is_none());
                assert!(restricted_factors.is_none());
            }
            other => panic!("expected zero exact, got {other:?}"),
        }
    }

    #[test]
    fn border_route_k1_power_difference() {
        // f = lim (1/(d eps)) [(x+eps y)^d - x^d] = x^{d-1} y as a
        // difference of two rank-1 products
        for d in [2usize, 3] {
            let n = 2;
            let x = var(0, n);
            let y = var(1, n);
            let e = LaurentScalar::eps_pow(1, 1);
            let xe = x.add(&y.scale(&e));
            let sc = |num: i64, den: i64| {
                LaurentScalar::monomial(CycloScalar::from_rational(1, crate::polyring::rat(num, den)), -1)
            };
            let mut lf = vec![xe.scale(&sc(1, d as i64))];
            for _ in 1..d {
                lf.push(xe.clone());
            }
            let mut lfr = vec![x.scale(&sc(-1, d as i64))];
            for _ in 1..d {
                lfr.push(x.clone());
            }
            let expect = {
                let xp = Poly::var(1, n, 0);
                let yp = Poly::var(1, n, 1);
                xp.pow(d as u32 - 1).mul(&yp)
            };
            match rb_deborder(&lf, &lfr, 1).unwrap() {
                RbDeborder::Border(dec) => {
                    assert_eq!(dec.limit().unwrap(), expect, "d={d}");
                }
                other => panic!("expected border, got {other:?}"),
            }
        }
    }

    #[test]
    fn border_route_k2_two_variables() {
        // restricted family spanning 2 dimensions: cancel x*y between the
        // two products; f = lim eps^{-1} [ (x+eps z) y - x y ] = z y
        let n = 3;
        let x = var(0, n);
        let y = var(1, n);
        let z = var(2, n);
        let e = LaurentScalar::eps_pow(1, 1);
        let einv = LaurentScalar::eps_pow(1, -1);
        let lf = vec![x.add(&z.scale(&e)).scale(&einv), y.clone()];
        let lfr = vec![x.scale(&einv).neg(), y.clone()];
        let expect = Poly::var(1, n, 2).mul(&Poly::var(1, n, 1));
        match rb_deborder(&lf, &lfr, 2).unwrap() {
            RbDeborder::Border(dec) => {
                assert_eq!(dec.limit().unwrap(), expect);
            }
            other => panic!("expected border, got {other:?}"),
        }
    }

    #[test]
    fn rank_violation_detected() {
        let n = 3;
        let lf = vec![var(0, n), var(1, n), var(2, n)];
        let lfr = lf.clone();
        assert!(matches!(
            rb_deborder(&lf, &lfr, 1),
            Err(Error::RankViolation { .. })
        ));
    }
}
