use super::cpoly::c_poly_at;
use super::ihl::Tree;
use super::ir::Circuit;
use crate::error::{Error, Result};
use crate::polyring::{rat, LaurentScalar, LinearForm, Monomial, Poly};

/// Input to the continuant compilation.
pub enum ContinuantInput {
    /// Odd-degree homogeneous polynomial as an arity-3 IHL formula.
    Odd(Circuit),
    /// Even degree d with one odd-degree arity-3 IHL formula per variable:
    /// pairs (variable index, formula for h_i); the represented polynomial is
    /// `f = (1/d) sum_i x_i h_i` (Euler's formula when h_i are the partials).
    Even {
        partials: Vec<(usize, Circuit)>,
        degree: u32,
    },
}

/// The compiled program: linear forms over ε with
/// `equiv_mod_eps(C_{r,d}(l_1,…,l_r), f)`.
pub struct ContinuantProgram {
    pub d: u32,
    pub forms: Vec<LinearForm>,
}

impl ContinuantProgram {
    pub fn r(&self) -> usize {
        self.forms.len()
    }

    /// `C_{r,d}` evaluated at the compiled forms.
    pub fn evaluate(&self) -> Result<Poly> {
        c_poly_at(self.forms.len(), self.d as usize, &self.forms)
    }
}

/// Linear form with coefficients linear in the formal parameter alpha.
#[derive(Clone, Debug)]
struct AlphaForm {
    part0: LinearForm,
    part1: LinearForm,
}

impl AlphaForm {
    fn zero(order: u32, nvars: usize) -> Self {
        AlphaForm {
            part0: LinearForm::zero(order, nvars),
            part1: LinearForm::zero(order, nvars),
        }
    }

    fn subst_eps(&self, k: i64) -> Self {
        AlphaForm {
            part0: self.part0.substitute_eps_power(k),
            part1: self.part1.substitute_eps_power(k),
        }
    }

    /// alpha -> mu (a fixed Laurent scalar); alpha disappears.
    fn subst_alpha(&self, mu: &LaurentScalar) -> Self {
        AlphaForm {
            part0: self.part0.add(&self.part1.scale(mu)),
            part1: LinearForm::zero(self.part1.order(), self.part1.nvars()),
        }
    }

    /// alpha -> c * alpha.
    fn scale_alpha(&self, c: &LaurentScalar) -> Self {
        AlphaForm {
            part0: self.part0.clone(),
            part1: self.part1.scale(c),
        }
    }

    /// alpha -> mu * alpha with an eps substitution applied first.
    fn subst_eps_scale_alpha(&self, k: i64, mu: &LaurentScalar) -> Self {
        self.subst_eps(k).scale_alpha(mu)
    }

    /// As a polynomial with alpha as the extra variable at index `alpha_idx`.
    fn to_poly(&self, order: u32, alpha_idx: usize) -> Poly {
        let mut p = self.part0.to_poly_n(order, alpha_idx + 1);
        for (i, c) in self.part1.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; alpha_idx + 1];
                exps[i] = 1;
                exps[alpha_idx] = 1;
                p.add_term(Monomial::new(exps), &c.embed(order).unwrap());
            }
        }
        p
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    Odd,
    Even,
}

impl Slot {
    fn flip(self) -> Slot {
        match self {
            Slot::Odd => Slot::Even,
            Slot::Even => Slot::Odd,
        }
    }
}

/// An alternating factor list `prod_t (id + l_t E_{slot_t})`.
#[derive(Clone)]
struct AlphaList {
    factors: Vec<(AlphaForm, Slot)>,
}

impl AlphaList {
    fn starts(&self) -> Slot {
        self.factors.first().map(|(_, s)| *s).unwrap_or(Slot::Odd)
    }

    fn map(&self, f: impl Fn(&AlphaForm) -> AlphaForm) -> AlphaList {
        AlphaList {
            factors: self.factors.iter().map(|(a, s)| (f(a), *s)).collect(),
        }
    }

    /// Concatenate, inserting a zero factor when the alternation would break.
    fn concat_pad(mut self, other: AlphaList, order: u32, nvars: usize) -> AlphaList {
        if let (Some(last), Some(first)) = (self.factors.last(), other.factors.first()) {
            if last.1 == first.1 {
                self.factors.push((AlphaForm::zero(order, nvars), last.1.flip()));
            }
        }
        self.factors.extend(other.factors);
        self
    }

    /// Transpose every factor and reverse the order; slots flip.
    fn transpose_reverse(&self) -> AlphaList {
        AlphaList {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(a, s)| (a.clone(), s.flip()))
                .collect(),
        }
    }

    fn assert_alternating(&self) {
        for w in self.factors.windows(2) {
            assert_ne!(w[0].1, w[1].1, "parity alternation broken");
        }
    }

    /// Expand `prod (id + l_t E_{slot_t}) - id` as 2×2 polynomials with alpha
    /// as an extra variable.
    fn expand_minus_id(&self, order: u32, alpha_idx: usize) -> [[Poly; 2]; 2] {
        let nv = alpha_idx + 1;
        let zero = || Poly::zero(order, nv);
        let one = || Poly::one(order, nv);
        let mut acc = [[one(), zero()], [zero(), one()]];
        for (form, slot) in &self.factors {
            let e = form.to_poly(order, alpha_idx);
            // factor = id + e * E_slot
            let (fi, fj) = match slot {
                Slot::Odd => (0usize, 1usize),
                Slot::Even => (1, 0),
            };
            let mut factor = [[one(), zero()], [zero(), one()]];
            factor[fi][fj] = e;
            let mut next = [[zero(), zero()], [zero(), zero()]];
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = zero();
                    for (k, fk) in factor.iter().enumerate() {
                        s = s.add(&acc[i][k].mul(&fk[j]));
                    }
                    next[i][j] = s;
                }
            }
            acc = next;
        }
        acc[0][0] = acc[0][0].sub(&one());
        acc[1][1] = acc[1][1].sub(&one());
        acc
    }
}

/// Circuit-shaped tree over {scaled Add, NegCube} with linear leaves.
enum CTree {
    Leaf(LinearForm),
    AddS(LaurentScalar, Box<CTree>, LaurentScalar, Box<CTree>),
    NegCube(Box<CTree>),
}

impl CTree {
    fn value(&self, order: u32, nvars: usize) -> Poly {
        match self {
            CTree::Leaf(f) => f.to_poly_n(order, nvars),
            CTree::AddS(c1, a, c2, b) => a
                .value(order, nvars)
                .scale(c1)
                .add(&b.value(order, nvars).scale(c2)),
            CTree::NegCube(a) => a.value(order, nvars).pow(3).neg(),
        }
    }

    fn neg(&self) -> CTree {
        match self {
            CTree::Leaf(f) => CTree::Leaf(f.neg()),
            CTree::AddS(c1, a, c2, b) => CTree::AddS(
                -c1,
                Box::new(a.clone_tree()),
                -c2,
                Box::new(b.clone_tree()),
            ),
            CTree::NegCube(a) => CTree::NegCube(Box::new(a.neg())),
        }
    }

    fn clone_tree(&self) -> CTree {
        match self {
            CTree::Leaf(f) => CTree::Leaf(f.clone()),
            CTree::AddS(c1, a, c2, b) => CTree::AddS(
                c1.clone(),
                Box::new(a.clone_tree()),
                c2.clone(),
                Box::new(b.clone_tree()),
            ),
            CTree::NegCube(a) => CTree::NegCube(Box::new(a.clone_tree())),
        }
    }
}

/// Normalize an arity-3 IHL formula to {scaled Add, NegCube} gates via
/// `24 xyz = (x+y+z)^3 - (x+y-z)^3 - (x-y+z)^3 + (x-y-z)^3`, carried as
/// rational edge scales on additions.
fn normalize(t: &Tree, order: u32) -> CTree {
    match t {
        Tree::Leaf(f, _) => CTree::Leaf(f.clone()),
        Tree::Add(a, b) => CTree::AddS(
            LaurentScalar::one(order),
            Box::new(normalize(a, order)),
            LaurentScalar::one(order),
            Box::new(normalize(b, order)),
        ),
        Tree::Mul3(a, b, c) => {
            let (na, nb, nc) = (
                normalize(a, order),
                normalize(b, order),
                normalize(c, order),
            );
            let one = LaurentScalar::one(order);
            let sum2 = |u: &CTree, v: &CTree| {
                CTree::AddS(
                    one.clone(),
                    Box::new(u.clone_tree()),
                    one.clone(),
                    Box::new(v.clone_tree()),
                )
            };
            let aa = sum2(&sum2(&na, &nb), &nc); // a+b+c
            let bb = sum2(&sum2(&na, &nb), &nc.neg()); // a+b-c
            let cc = sum2(&sum2(&na, &nb.neg()), &nc); // a-b+c
            let dd = sum2(&sum2(&na, &nb.neg()), &nc.neg()); // a-b-c
            // xyz = (1/24)(-NC(A) + NC(B) + NC(C) - NC(D))
            let q = |num: i64| LaurentScalar::from_rational(order, rat(num, 24));
            let left = CTree::AddS(
                q(-1),
                Box::new(CTree::NegCube(Box::new(aa))),
                q(1),
                Box::new(CTree::NegCube(Box::new(bb))),
            );
            let right = CTree::AddS(
                q(1),
                Box::new(CTree::NegCube(Box::new(cc))),
                q(-1),
                Box::new(CTree::NegCube(Box::new(dd))),
            );
            CTree::AddS(
                one.clone(),
                Box::new(left),
                one,
                Box::new(right),
            )
        }
        Tree::Mul(..) => unreachable!("arity-2 products are excluded"),
    }
}

struct Compiler {
    order: u32,
    nvars: usize,
    verify: bool,
}

impl Compiler {
    /// Build a list with `alpha·g·E_odd ≃ prod(id + l E) - id`, where g is
    /// the value of the tree; the invariant (all non-main terms have positive
    /// ε-order) is verified per gadget when `verify` is set.
    fn build(&self, t: &CTree) -> Result<AlphaList> {
        match t {
            CTree::Leaf(f) => {
                let af = AlphaForm {
                    part0: LinearForm::zero(self.order, self.nvars),
                    part1: f.clone(),
                };
                Ok(AlphaList {
                    factors: vec![(af, Slot::Odd)],
                })
            }
            CTree::AddS(c1, a, c2, b) => {
                let la = self.build(a)?.map(|f| f.scale_alpha(c1));
                let lb = self.build(b)?.map(|f| f.scale_alpha(c2));
                Ok(la.concat_pad(lb, self.order, self.nvars))
            }
            CTree::NegCube(a) => {
                let la = self.build(a)?;
                let g = a.value(self.order, self.nvars);
                let k = self.pick_k(&la, &g)?;
                // outer blocks: eps -> eps^k, alpha -> ±eps^{-1}
                let plus = la.map(|f| {
                    f.subst_eps(k).subst_alpha(&LaurentScalar::eps_pow(self.order, -1))
                });
                let minus = la.map(|f| {
                    f.subst_eps(k).subst_alpha(&(-&LaurentScalar::eps_pow(self.order, -1)))
                });
                // middle block: eps -> eps^3, alpha -> eps^2 alpha, transposed
                let middle = la
                    .map(|f| f.subst_eps_scale_alpha(3, &LaurentScalar::eps_pow(self.order, 2)))
                    .transpose_reverse();
                let out = plus
                    .concat_pad(middle, self.order, self.nvars)
                    .concat_pad(minus, self.order, self.nvars);
                out.assert_alternating();
                if self.verify {
                    let gate_value = g.pow(3).neg();
                    self.verify_invariant(&out, &gate_value)?;
                }
                Ok(out)
            }
        }
    }

    /// Smallest k >= 1 such that every residual term (ε-order m >= 1,
    /// alpha-degree j) keeps order k·m - j >= 2 under alpha -> ±eps^{-1}.
    fn pick_k(&self, list: &AlphaList, g: &Poly) -> Result<i64> {
        let alpha_idx = self.nvars;
        let m = list.expand_minus_id(self.order, alpha_idx);
        let mut k: i64 = 1;
        for (i, row) in m.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let mut residual = entry.clone();
                if i == 0 && j == 1 {
                    // subtract the main term alpha * g
                    let mut main = g.embed(self.order)?.with_nvars(alpha_idx + 1);
                    let alpha_mono = Monomial::var(alpha_idx);
                    main = main.mul(&Poly::from_terms(
                        self.order,
                        alpha_idx + 1,
                        [(alpha_mono, LaurentScalar::one(self.order))],
                    ));
                    residual = residual.sub(&main);
                }
                for (mono, coeff) in residual.terms() {
                    let jdeg = mono.exponent(alpha_idx) as i64;
                    let morder = coeff.min_exponent().unwrap_or(0);
                    if morder < 1 {
                        return Err(Error::ConstraintViolation(format!(
                            "continuant invariant broken: residual term with eps-order {morder}"
                        )));
                    }
                    k = k.max((2 + jdeg + morder - 1) / morder);
                }
            }
        }
        Ok(k)
    }

    /// Check that `prod(id + l E) - id - alpha*value*E_odd` has only terms of
    /// positive ε-order.
    fn verify_invariant(&self, list: &AlphaList, value: &Poly) -> Result<()> {
        let alpha_idx = self.nvars;
        let m = list.expand_minus_id(self.order, alpha_idx);
        for (i, row) in m.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let mut residual = entry.clone();
                if i == 0 && j == 1 {
                    let alpha_mono = Monomial::var(alpha_idx);
                    let main = value.embed(self.order)?.with_nvars(alpha_idx + 1).mul(
                        &Poly::from_terms(
                            self.order,
                            alpha_idx + 1,
                            [(alpha_mono, LaurentScalar::one(self.order))],
                        ),
                    );
                    residual = residual.sub(&main);
                }
                if let Some(q) = residual.min_eps_order() {
                    if q < 1 {
                        return Err(Error::ConstraintViolation(format!(
                            "continuant gadget check failed at entry ({i},{j}): order {q}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Compile a polynomial into continuant form: linear forms l_1, …, l_r over ε
/// with `equiv_mod_eps(C_{r,d}(l), f)`.
pub fn continuant_compile(input: &ContinuantInput) -> Result<ContinuantProgram> {
    match input {
        ContinuantInput::Odd(c) => {
            if !c.is_ihl() || !c.is_arity3() || !c.is_formula() {
                return Err(Error::MalformedCircuit(
                    "odd input must be an arity-3 IHL formula".into(),
                ));
            }
            let f = c.eval_single()?;
            let d = match f.degree() {
                crate::polyring::Degree::Of(d) if d % 2 == 1 && f.is_homogeneous() => d,
                crate::polyring::Degree::Any => {
                    return Err(Error::DegreeMismatch {
                        expected: 1,
                        got: None,
                    })
                }
                _ => return Err(Error::NonHomogeneous),
            };
            let t = Tree::from_circuit(c)?;
            let order = c.order;
            let ct = normalize(&t, order);
            let compiler = Compiler {
                order,
                nvars: c.nvars,
                verify: true,
            };
            let list = compiler.build(&ct)?;
            // set alpha to 1
            let one = LaurentScalar::one(order);
            let final_list = list.map(|fm| fm.subst_alpha(&one));
            final_list.assert_alternating();
            assert_eq!(final_list.starts(), Slot::Odd);
            let forms = final_list
                .factors
                .iter()
                .map(|(a, _)| a.part0.clone())
                .collect();
            Ok(ContinuantProgram {
                d: d as u32,
                forms,
            })
        }
        ContinuantInput::Even { partials, degree } => {
            let d = *degree;
            if d == 0 || d % 2 != 0 {
                return Err(Error::DegreeMismatch {
                    expected: d as usize,
                    got: None,
                });
            }
            let order = partials
                .iter()
                .map(|(_, c)| c.order)
                .fold(1, num::integer::lcm);
            let nvars = partials
                .iter()
                .map(|(i, c)| c.nvars.max(i + 1))
                .max()
                .unwrap_or(0);
            let compiler = Compiler {
                order,
                nvars,
                verify: true,
            };
            let inv_d = LaurentScalar::from_rational(order, rat(1, d as i64));
            let mut total: Option<AlphaList> = None;
            for (var, circ) in partials {
                if !circ.is_ihl() || !circ.is_arity3() || !circ.is_formula() {
                    return Err(Error::MalformedCircuit(
                        "partials must be arity-3 IHL formulas".into(),
                    ));
                }
                let t = Tree::from_circuit(circ)?;
                let ct = normalize(&t, order);
                let li = compiler.build(&ct)?;
                // b-blocks: eps -> eps^3, alpha -> ±eps/d, then transpose for
                // the even slots
                let eps_over_d = &LaurentScalar::eps_pow(order, 1) * &inv_d;
                let plus_b = li
                    .map(|f| f.subst_eps(3).subst_alpha(&eps_over_d))
                    .transpose_reverse();
                let minus_b = li
                    .map(|f| f.subst_eps(3).subst_alpha(&(-&eps_over_d)))
                    .transpose_reverse();
                // a-factors: single (id ± eps x_var E_odd)
                let xform = LinearForm::var(order, nvars, *var)
                    .scale(&LaurentScalar::eps_pow(order, 1));
                let single = |f: LinearForm| AlphaList {
                    factors: vec![(
                        AlphaForm {
                            part0: f,
                            part1: LinearForm::zero(order, nvars),
                        },
                        Slot::Odd,
                    )],
                };
                let block = single(xform.neg())
                    .concat_pad(minus_b, order, nvars)
                    .concat_pad(single(xform.clone()), order, nvars)
                    .concat_pad(plus_b, order, nvars);
                block.assert_alternating();
                total = Some(match total {
                    None => block,
                    Some(t0) => t0.concat_pad(block, order, nvars),
                });
            }
            let Some(total) = total else {
                return Err(Error::MalformedCircuit("no partials supplied".into()));
            };
            total.assert_alternating();
            // eps -> eps^{d/2}, then scale every form by eps^{-1}
            let half = (d / 2) as i64;
            let eps_inv = LaurentScalar::eps_pow(order, -1);
            let forms: Vec<LinearForm> = total
                .factors
                .iter()
                .map(|(a, _)| {
                    debug_assert!(a.part1.is_zero());
                    a.part0.substitute_eps_power(half).scale(&eps_inv)
                })
                .collect();
            Ok(ContinuantProgram { d, forms })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ir::CircuitBuilder;

    #[test]
    fn cube_of_variable() {
        // f = x^3 as a single Mul3 (separate leaves keep it a formula)
        let mut b = CircuitBuilder::new(1, 1);
        let x1 = b.var(0);
        let x2 = b.var(0);
        let x3 = b.var(0);
        let m = b.mul3(x1, x2, x3);
        let c = b.finish(vec![m]);
        let f = c.eval_single().unwrap();
        let prog = continuant_compile(&ContinuantInput::Odd(c)).unwrap();
        let val = prog.evaluate().unwrap();
        assert!(val.equiv_mod_eps(&f), "got {val}");
    }

    #[test]
    fn product_xyz() {
        let mut b = CircuitBuilder::new(1, 3);
        let x = b.var(0);
        let y = b.var(1);
        let z = b.var(2);
        let m = b.mul3(x, y, z);
        let c = b.finish(vec![m]);
        let f = c.eval_single().unwrap();
        let prog = continuant_compile(&ContinuantInput::Odd(c)).unwrap();
        assert!(prog.evaluate().unwrap().equiv_mod_eps(&f));
    }

    #[test]
    fn sum_of_leaves_degree_one() {
        let mut b = CircuitBuilder::new(1, 2);
        let x = b.var(0);
        let y = b.var(1);
        let s = b.add(x, y);
        let c = b.finish(vec![s]);
        let f = c.eval_single().unwrap();
        let prog = continuant_compile(&ContinuantInput::Odd(c)).unwrap();
        assert!(prog.evaluate().unwrap().equiv_mod_eps(&f));
    }

    #[test]
    fn even_bilinear() {
        // f = x1 x2 + x3 x4, partials: (x2, x1, x4, x3), d = 2
        let order = 1;
        let nv = 4;
        let leaf = |i: usize| {
            let mut b = CircuitBuilder::new(order, nv);
            let g = b.var(i);
            b.finish(vec![g])
        };
        let partials = vec![(0, leaf(1)), (1, leaf(0)), (2, leaf(3)), (3, leaf(2))];
        let prog = continuant_compile(&ContinuantInput::Even {
            partials,
            degree: 2,
        })
        .unwrap();
        let f = Poly::var(order, nv, 0)
            .mul(&Poly::var(order, nv, 1))
            .add(&Poly::var(order, nv, 2).mul(&Poly::var(order, nv, 3)));
        let val = prog.evaluate().unwrap();
        assert!(val.equiv_mod_eps(&f), "got {val}");
    }
}
