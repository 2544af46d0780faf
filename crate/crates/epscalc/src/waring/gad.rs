use super::linalg;
use super::types::{Gad, GadSummand, WaringDecomposition};
use crate::error::{Error, Result};
use crate::polyring::{
    proportional, CycloScalar, LaurentScalar, LinearForm, Monomial, Poly, Rational,
};
use num::BigInt;

/// Normalize an ε-free form to leading coefficient one.
fn normalize_form(f: &LinearForm) -> LinearForm {
    let lead = f
        .coeffs()
        .iter()
        .find(|c| !c.is_zero())
        .expect("zero form has no normalization");
    f.scale(&lead.inverse_monomial().unwrap())
}

/// Group summand indices by the projective limit of their forms: two Laurent
/// families are equivalent iff their lowest-order coefficient vectors are
/// proportional (tested via 2×2 minors).
fn group_by_projective_limit(forms: &[LinearForm]) -> Result<Vec<(LinearForm, Vec<usize>)>> {
    let mut classes: Vec<(LinearForm, Vec<usize>)> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let (_, low) = f.lowest_order_form().ok_or(Error::ZeroForm)?;
        match classes.iter_mut().find(|(rep, _)| proportional(rep, &low)) {
            Some((_, members)) => members.push(i),
            None => classes.push((normalize_form(&low), vec![i])),
        }
    }
    Ok(classes)
}

/// One scaled summand of a local border decomposition.
#[derive(Clone)]
struct Entry {
    scale: LaurentScalar,
    form: LinearForm,
}

/// Exact ε-limit of `sum_i scale_i form_i^d` by direct series expansion;
/// errors when a pole survives (by the Jordan separation lemma this means the
/// input was not a converging decomposition).
fn expansion_limit(entries: &[Entry], d: u32, order: u32, nvars: usize) -> Result<Poly> {
    let mut acc = Poly::zero(order, nvars);
    for e in entries {
        acc = acc.add(&e.form.to_poly_n(order, nvars).pow(d).scale(&e.scale));
    }
    acc.limit()
}

/// Local limit of a local border decomposition based at [x_1] (all forms have
/// lowest-order part proportional to x_1), following the derivative/Euler
/// recursion; at the bases r = 1 and d = r - 1 the limit is taken by direct
/// series expansion.
fn local_limit(
    entries: &[Entry],
    d: u32,
    order: u32,
    nvars: usize,
    cut: i64,
) -> Result<Poly> {
    let r = entries.len();
    if r == 0 {
        return Ok(Poly::zero(order, nvars));
    }
    if r == 1 || d as usize == r - 1 || d == 0 {
        return expansion_limit(entries, d, order, nvars);
    }
    // standardize the first summand: after substituting
    // x_1 := (gamma_1/abar_1) x_1 - sum_{i>1} (abar_i/abar_1) x_i
    // the first form becomes gamma_1 eps^{q1} x_1 exactly.
    let l1 = &entries[0].form;
    let q1 = l1.min_eps_order().ok_or(Error::ZeroForm)?;
    let unit_inv = {
        // abar_1 = eps^{-q1} * coeff_1(l1), a unit power series
        let a1 = l1.coeff(0);
        let abar1 = &a1 * &LaurentScalar::eps_pow(order, -q1);
        abar1
            .inverse_series(cut)
            .ok_or_else(|| Error::ConstraintViolation("standardization unit not invertible".into()))?
    };
    let gamma1 = LaurentScalar::from_cyclo(l1.coeff(0).coeff(q1));
    let substituted: Vec<Entry> = entries
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            if idx == 0 {
                // the standardized summand is exactly gamma_1 eps^{q1} x_1
                let mut coeffs = vec![LaurentScalar::zero(order); nvars];
                coeffs[0] = &gamma1 * &LaurentScalar::eps_pow(order, q1);
                return Entry {
                    scale: e.scale.clone(),
                    form: LinearForm::new(coeffs),
                };
            }
            let beta1 = e.form.coeff(0);
            let mut coeffs = Vec::with_capacity(nvars);
            // new coefficient of x_1: beta_1 * gamma_1 / abar_1
            coeffs.push((&(&beta1 * &gamma1) * &unit_inv).truncate(cut));
            for i in 1..nvars {
                // new coefficient of x_i: beta_i - beta_1 * abar_i / abar_1,
                // with abar the coefficients of the standardized summand l1
                let abar_i = &l1.coeff(i) * &LaurentScalar::eps_pow(order, -q1);
                let corr = (&(&beta1 * &abar_i) * &unit_inv).truncate(cut);
                coeffs.push(&e.form.coeff(i) - &corr);
            }
            Entry {
                scale: e.scale.clone(),
                form: LinearForm::new(coeffs),
            }
        })
        .collect();
    // derivative sub-decompositions and Euler's formula
    let d_rat = Rational::from(BigInt::from(d as i64));
    let mut acc = Poly::zero(order, nvars);
    for j in 0..nvars {
        let sub: Vec<Entry> = substituted
            .iter()
            .filter_map(|e| {
                let alpha_j = e.form.coeff(j);
                if alpha_j.is_zero() {
                    None
                } else {
                    Some(Entry {
                        scale: (&e.scale * &alpha_j).scale_rat(&d_rat).truncate(cut),
                        form: e.form.clone(),
                    })
                }
            })
            .collect();
        if sub.is_empty() {
            continue;
        }
        let fj = local_limit(&sub, d - 1, order, nvars, cut)?;
        acc = acc.add(&Poly::var(order, nvars, j).mul(&fj));
    }
    Ok(acc.scale_rat(&Rational::new(BigInt::from(1), BigInt::from(d as i64))))
}

/// Working ε-precision for the truncated series divisions inside the local
/// recursion, derived from the pole depths actually present.
fn precision_for(dec: &WaringDecomposition) -> i64 {
    let mut pole = 0i64;
    for f in &dec.forms {
        if let Some(q) = f.min_eps_order() {
            pole = pole.max(-q);
        }
        for c in f.coeffs() {
            if let Some(m) = c.max_exponent() {
                pole = pole.max(m);
            }
        }
    }
    let mut spole = 0i64;
    for s in &dec.scales {
        if let Some(q) = s.min_exponent() {
            spole = spole.max(-q);
        }
    }
    (dec.d as i64) * (pole + 1) + spole + dec.d as i64 + 4
}

/// Transform a border Waring decomposition into a generalized additive
/// decomposition: partition the summands by the projective limits of their
/// forms, compute each local limit `l^{d-r_k+1} g_k` through the Euler
/// recursion, and verify that no cross-class cancellation occurred.
pub fn gad_from_border(dec: &WaringDecomposition) -> Result<Gad> {
    let r = dec.len();
    let d = dec.d;
    if (d as usize) < r.saturating_sub(1) {
        return Err(Error::DegreeTooLow { d: d as usize, r });
    }
    let order = dec.order();
    let nvars = dec.nvars();
    let total_limit = dec.limit()?;
    let classes = group_by_projective_limit(&dec.forms)?;
    let mut cut = precision_for(dec);
    let mut last = None;
    for _ in 0..3 {
        match gad_attempt(dec, &classes, order, nvars, cut) {
            Ok(gad) => {
                if gad.expand() == total_limit {
                    return Ok(gad);
                }
                // insufficient precision: retry with a deeper cut
                last = Some(Error::ConstraintViolation(
                    "gad expansion mismatch at every precision".into(),
                ));
            }
            // truncation cannot create spurious poles, so a surviving pole
            // means cross-class cancellation: invalid input
            Err(e @ Error::DivergentLimit { .. }) => return Err(e),
            Err(e @ Error::ConstraintViolation(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
        cut *= 2;
    }
    Err(last.unwrap())
}

fn gad_attempt(
    dec: &WaringDecomposition,
    classes: &[(LinearForm, Vec<usize>)],
    order: u32,
    nvars: usize,
    cut: i64,
) -> Result<Gad> {
    let d = dec.d;
    let mut summands = Vec::new();
    for (base, members) in classes {
        let r_k = members.len() as u32;
        // change of basis sending the base direction to x_1: substitution
        // matrix B = C^{-1} where C's first row is the base coefficient vector
        let base_row: Vec<CycloScalar> = (0..nvars)
            .map(|i| base.coeff(i).as_cyclo().unwrap())
            .collect();
        let c_rows = linalg::complete_basis(&[base_row], nvars, order);
        let b_mat = linalg::invert(&c_rows, order)
            .ok_or_else(|| Error::ConstraintViolation("basis completion not invertible".into()))?;
        let to_y = |f: &LinearForm| -> LinearForm {
            // row vector of coefficients times B
            let coeffs: Vec<LaurentScalar> = (0..nvars)
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
                .collect();
            LinearForm::new(coeffs)
        };
        let entries: Vec<Entry> = members
            .iter()
            .map(|&i| Entry {
                scale: dec.scales[i].embed(order).unwrap(),
                form: to_y(&dec.forms[i].embed(order).unwrap()),
            })
            .collect();
        let f_y = local_limit(&entries, d, order, nvars, cut)?;
        // divide by y_1^{d - r_k + 1}
        let pow = d + 1 - r_k;
        let mut g_y = Poly::zero(order, nvars);
        for (m, c) in f_y.terms() {
            let e1 = m.exponent(0);
            if e1 < pow {
                return Err(Error::ConstraintViolation(format!(
                    "local limit not divisible by base^{pow}"
                )));
            }
            let mut exps = m.exponents().to_vec();
            exps[0] = e1 - pow;
            g_y.add_term(Monomial::new(exps), c);
        }
        // back to the original coordinates: substitute y = C x
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
        let g_x = g_y.substitute_linear(&c_map)?;
        summands.push(GadSummand {
            ell: base.clone(),
            g: g_x,
            r_k,
        });
    }
    Ok(Gad { d, summands })
}

/// Labels for the small border-rank normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// l1^d + l2^d
    TwoPowers,
    /// l1^{d-1} l2
    PowerTimesLinear,
    /// l1^d + l2^d + l3^d
    ThreePowers,
    /// l1^d + l2^{d-1} l3
    PowerPlusPowerTimesLinear,
    /// l1^{d-1} l2 + l1^{d-2} l3^2
    DoubledBase,
}

impl std::fmt::Display for NormalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NormalForm::TwoPowers => "l1^d + l2^d",
            NormalForm::PowerTimesLinear => "l1^(d-1) l2",
            NormalForm::ThreePowers => "l1^d + l2^d + l3^d",
            NormalForm::PowerPlusPowerTimesLinear => "l1^d + l2^(d-1) l3",
            NormalForm::DoubledBase => "l1^(d-1) l2 + l1^(d-2) l3^2",
        };
        write!(f, "{s}")
    }
}

/// Classify a GAD of total rank 2 or 3 into its normal form, using the
/// partition (r_k) and, in the single-summand rank-3 case, the rank of the
/// quadratic g_1 restricted to the hyperplane l_1 = 0 (it must be a perfect
/// square there).
pub fn classify_bwr_normal_form(gad: &Gad) -> Result<NormalForm> {
    let total = gad.total_rank() as usize;
    let mut ranks: Vec<u32> = gad.summands.iter().map(|s| s.r_k).collect();
    ranks.sort_unstable();
    match (total, ranks.as_slice()) {
        (2, [1, 1]) => Ok(NormalForm::TwoPowers),
        (2, [2]) => Ok(NormalForm::PowerTimesLinear),
        (3, [1, 1, 1]) => Ok(NormalForm::ThreePowers),
        (3, [1, 2]) => Ok(NormalForm::PowerPlusPowerTimesLinear),
        (3, [3]) => {
            let s = &gad.summands[0];
            let order = num::integer::lcm(s.ell.order(), s.g.order());
            let nvars = s.ell.nvars().max(s.g.nvars());
            // rank of g restricted to ell = 0
            let row: Vec<CycloScalar> = (0..nvars)
                .map(|i| s.ell.coeff(i).as_cyclo().unwrap().embed(order).unwrap())
                .collect();
            let c_rows = linalg::complete_basis(&[row], nvars, order);
            let b_mat = linalg::invert(&c_rows, order).unwrap();
            let map: Vec<LinearForm> = (0..nvars)
                .map(|i| {
                    LinearForm::new(
                        (0..nvars)
                            .map(|j| LaurentScalar::from_cyclo(b_mat[i][j].clone()))
                            .collect(),
                    )
                })
                .collect();
            let g_y = s.g.embed(order)?.substitute_linear(&map)?;
            let restricted = g_y.substitute_const(0, &LaurentScalar::zero(order));
            // symmetric matrix of the restricted quadratic
            let half = Rational::new(BigInt::from(1), BigInt::from(2));
            let mut mat = vec![vec![CycloScalar::zero(order); nvars]; nvars];
            for (m, c) in restricted.terms() {
                let exps = m.exponents();
                let nz: Vec<usize> = (0..exps.len()).filter(|&i| exps[i] > 0).collect();
                let c = c.as_cyclo().unwrap();
                match nz.as_slice() {
                    [i] => mat[*i][*i] = c,
                    [i, j] => {
                        let v = c.scale(&half);
                        mat[*i][*j] = v.clone();
                        mat[*j][*i] = v;
                    }
                    _ => unreachable!("quadratic"),
                }
            }
            if linalg::rank(&mat, order) <= 1 {
                Ok(NormalForm::DoubledBase)
            } else {
                Err(Error::InvalidGad(
                    "rank-3 single-summand quadratic is not l1 l2 + l3^2".into(),
                ))
            }
        }
        _ => Err(Error::UnsupportedRank(total)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn var(i: usize, n: usize) -> LinearForm {
        LinearForm::var(1, n, i)
    }

    /// eq-(2.1)-style decomposition: (1/(d eps)) [(x0+eps y0)^d - x0^d + ...]
    fn paper_example(d: u32) -> WaringDecomposition {
        // variables: x0, x1, y0, y1, y2
        let n = 5;
        let order = 1;
        let e = LaurentScalar::eps_pow(order, 1);
        let x0 = var(0, n);
        let x1 = var(1, n);
        let y0 = var(2, n);
        let y1 = var(3, n);
        let y2 = var(4, n);
        let x01 = x0.add(&x1);
        let sc = |num: i64| {
            LaurentScalar::monomial(
                CycloScalar::from_rational(order, rat(num, d as i64)),
                -1,
            )
        };
        WaringDecomposition::new(
            d,
            vec![
                x0.add(&y0.scale(&e)),
                x0.clone(),
                x1.add(&y1.scale(&e)),
                x1.clone(),
                x01.add(&y2.scale(&e)),
                x01.clone(),
            ],
            vec![sc(1), sc(-1), sc(1), sc(-1), sc(2), sc(-2)],
        )
        .unwrap()
    }

    #[test]
    fn paper_gad_d5() {
        let dec = paper_example(5);
        let gad = gad_from_border(&dec).unwrap();
        assert_eq!(gad.summands.len(), 3);
        assert_eq!(gad.expand(), dec.limit().unwrap());
        // the three summands are x0^4 y0, x1^4 y1, 2 (x0+x1)^4 y2
        let n = 5;
        let expected = [
            (var(0, n), Poly::var(1, n, 2), 2u32),
            (var(1, n), Poly::var(1, n, 3), 2),
            (
                var(0, n).add(&var(1, n)),
                Poly::var(1, n, 4).scale_rat(&crate::polyring::rat_int(2)),
                2,
            ),
        ];
        for (ell, g, rk) in &expected {
            let found = gad
                .summands
                .iter()
                .find(|s| s.ell == *ell)
                .unwrap_or_else(|| panic!("missing class {ell:?}"));
            assert_eq!(&found.g, g);
            assert_eq!(found.r_k, *rk);
        }
    }

    #[test]
    fn wild_form_rejected() {
        // d = 3, r = 5 decomposition of the wild cubic: 3 < 5 - 1
        let n = 5;
        let order = 1;
        let e = LaurentScalar::eps_pow(order, 1);
        let x0 = var(0, n);
        let x1 = var(1, n);
        let sc = |num: i64| {
            LaurentScalar::monomial(CycloScalar::from_rational(order, rat(num, 9)), -1)
        };
        let dec = WaringDecomposition::new(
            3,
            vec![
                x0.add(&var(2, n).scale(&e)),
                x1.add(&var(3, n).scale(&e)),
                x0.add(&x1).add(&var(4, n).scale(&e)),
                x0.add(&x1.scale(&LaurentScalar::from_int(order, 2))),
                x0.scale(&LaurentScalar::from_int(order, 2)).add(&x1),
            ],
            vec![sc(3), sc(3), sc(6), sc(-1), sc(-1)],
        )
        .unwrap();
        match gad_from_border(&dec) {
            Err(Error::DegreeTooLow { d: 3, r: 5 }) => {}
            other => panic!("expected DegreeTooLow, got {other:?}"),
        }
    }

    #[test]
    fn exact_rank_one() {
        let dec = WaringDecomposition::new(
            4,
            vec![var(0, 2).add(&var(1, 2))],
            vec![LaurentScalar::one(1)],
        )
        .unwrap();
        let gad = gad_from_border(&dec).unwrap();
        assert_eq!(gad.summands.len(), 1);
        assert_eq!(gad.summands[0].r_k, 1);
        assert_eq!(gad.expand(), dec.expand());
    }

    #[test]
    fn normal_form_labels() {
        let n = 3;
        let one = Poly::one(1, n);
        // [(x, 1, 1), (y, 1, 1)] -> two powers
        let g = Gad {
            d: 4,
            summands: vec![
                GadSummand { ell: var(0, n), g: one.clone(), r_k: 1 },
                GadSummand { ell: var(1, n), g: one.clone(), r_k: 1 },
            ],
        };
        assert_eq!(classify_bwr_normal_form(&g).unwrap(), NormalForm::TwoPowers);
        // [(x, y, 2)] -> power times linear
        let g = Gad {
            d: 4,
            summands: vec![GadSummand {
                ell: var(0, n),
                g: Poly::var(1, n, 1),
                r_k: 2,
            }],
        };
        assert_eq!(
            classify_bwr_normal_form(&g).unwrap(),
            NormalForm::PowerTimesLinear
        );
        // [(x, xy + z^2, 3)] -> doubled base
        let xy = Poly::var(1, n, 0).mul(&Poly::var(1, n, 1));
        let z2 = Poly::var(1, n, 2).pow(2);
        let g = Gad {
            d: 4,
            summands: vec![GadSummand {
                ell: var(0, n),
                g: xy.add(&z2),
                r_k: 3,
            }],
        };
        assert_eq!(classify_bwr_normal_form(&g).unwrap(), NormalForm::DoubledBase);
        // rank 4 unsupported
        let g = Gad {
            d: 4,
            summands: vec![GadSummand {
                ell: var(0, n),
                g: one.clone(),
                r_k: 4,
            }],
        };
        assert!(matches!(
            classify_bwr_normal_form(&g),
            Err(Error::UnsupportedRank(4))
        ));
    }
}
