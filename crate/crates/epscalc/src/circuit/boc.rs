use super::ihl::Tree;
use super::ir::Circuit;
use crate::error::{Error, Result};
use crate::polyring::{LaurentScalar, LinearForm, Poly};

/// Readout position of an iterated matrix product program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramPosition {
    Entry(usize, usize),
    Trace,
}

/// An iterated matrix product `alpha ((prod_k (id + A_k)) - id)` read at a
/// position, with homogeneous linear entries in the factors.
#[derive(Clone, Debug)]
pub struct MatrixProgram {
    pub dim: usize,
    /// factors[k][i][j] is the (i,j) entry of A_k
    pub factors: Vec<Vec<Vec<LinearForm>>>,
    pub alpha: LaurentScalar,
    pub position: ProgramPosition,
}

impl MatrixProgram {
    pub fn order(&self) -> u32 {
        self.factors
            .iter()
            .flatten()
            .flatten()
            .map(|f| f.order())
            .fold(self.alpha.order(), num::integer::lcm)
    }

    pub fn nvars(&self) -> usize {
        self.factors
            .iter()
            .flatten()
            .flatten()
            .map(|f| f.nvars())
            .max()
            .unwrap_or(0)
    }

    /// The full matrix `prod_k (id + A_k) - id` as exact polynomials.
    pub fn product_minus_id(&self) -> Vec<Vec<Poly>> {
        let order = self.order();
        let nvars = self.nvars();
        let n = self.dim;
        let mut acc: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Poly::one(order, nvars)
                        } else {
                            Poly::zero(order, nvars)
                        }
                    })
                    .collect()
            })
            .collect();
        for a in &self.factors {
            let factor: Vec<Vec<Poly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut p = a[i][j].to_poly_n(order, nvars);
                            if i == j {
                                p = p.add(&Poly::one(order, nvars));
                            }
                            p
                        })
                        .collect()
                })
                .collect();
            let mut next = vec![vec![Poly::zero(order, nvars); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = Poly::zero(order, nvars);
                    for (k, fk) in factor.iter().enumerate() {
                        s = s.add(&acc[i][k].mul(&fk[j]));
                    }
                    next[i][j] = s;
                }
            }
            acc = next;
        }
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = row[i].sub(&Poly::one(order, nvars));
        }
        acc
    }

    /// alpha times the readout of `prod - id`.
    pub fn value(&self) -> Poly {
        let m = self.product_minus_id();
        let raw = match self.position {
            ProgramPosition::Entry(i, j) => m[i][j].clone(),
            ProgramPosition::Trace => {
                let order = self.order();
                let nvars = self.nvars();
                let mut s = Poly::zero(order, nvars);
                for (i, row) in m.iter().enumerate() {
                    s = s.add(&row[i]);
                }
                s
            }
        };
        raw.scale(&self.alpha)
    }
}

type Mat3 = Vec<Vec<LinearForm>>;

fn zero_mat(order: u32, nvars: usize) -> Mat3 {
    vec![vec![LinearForm::zero(order, nvars); 3]; 3]
}

fn e_entry(order: u32, nvars: usize, i: usize, j: usize, f: &LinearForm) -> Mat3 {
    let mut m = zero_mat(order, nvars);
    m[i][j] = f.clone();
    m
}

/// The third index completing {i, j} in {0, 1, 2}.
fn third(i: usize, j: usize) -> usize {
    3 - i - j
}

/// Ben-Or–Cleve compilation: for an IHL formula of depth δ and an
/// off-diagonal position (i,j), produce at most 4^δ factors with
/// `f · E_{i,j} = (id + A_1) ⋯ (id + A_r) - id` exactly. The recursion keeps
/// companion lists for -f; a product gate at position (i,j) uses positions
/// (i,k), (k,j) for its children and the four-factor commutator identity.
pub fn ben_or_cleve(c: &Circuit, pos: (usize, usize)) -> Result<MatrixProgram> {
    let (pi, pj) = pos;
    if pi == pj || pi >= 3 || pj >= 3 {
        return Err(Error::MalformedCircuit(
            "position must be off-diagonal in a 3x3 matrix".into(),
        ));
    }
    if !c.is_ihl() {
        return Err(Error::MalformedCircuit("input must be IHL".into()));
    }
    let t = Tree::from_circuit(c)?;
    let order = c.order;
    let nvars = c.nvars;
    let (plus, _minus) = boc_rec(&t, pi, pj, order, nvars)?;
    Ok(MatrixProgram {
        dim: 3,
        factors: plus,
        alpha: LaurentScalar::one(order),
        position: ProgramPosition::Entry(pi, pj),
    })
}

/// Returns factor lists for +g E_{(i,j)} and -g E_{(i,j)}.
fn boc_rec(
    t: &Tree,
    i: usize,
    j: usize,
    order: u32,
    nvars: usize,
) -> Result<(Vec<Mat3>, Vec<Mat3>)> {
    match t {
        Tree::Leaf(f, k) => {
            if !k.is_zero() {
                return Err(Error::MalformedCircuit("IHL leaves carry no constant".into()));
            }
            Ok((
                vec![e_entry(order, nvars, i, j, f)],
                vec![e_entry(order, nvars, i, j, &f.neg())],
            ))
        }
        Tree::Add(a, b) => {
            let (pa, ma) = boc_rec(a, i, j, order, nvars)?;
            let (pb, mb) = boc_rec(b, i, j, order, nvars)?;
            let mut plus = pa;
            plus.extend(pb);
            let mut minus = ma;
            minus.extend(mb);
            Ok((plus, minus))
        }
        Tree::Mul(a, b) => {
            let k = third(i, j);
            // (id + f E_{ik}) (id + g E_{kj}) (id - f E_{ik}) (id - g E_{kj})
            //   = id + fg E_{ij}
            let (pa, ma) = boc_rec(a, i, k, order, nvars)?;
            let (pb, mb) = boc_rec(b, k, j, order, nvars)?;
            let mut plus = Vec::with_capacity(pa.len() + pb.len() + ma.len() + mb.len());
            plus.extend(pa.iter().cloned());
            plus.extend(pb.iter().cloned());
            plus.extend(ma.iter().cloned());
            plus.extend(mb.iter().cloned());
            // the minus variant swaps the sign pattern:
            // (id - f)(id + g)(id + f)(id - g) = id - fg E_{ij}
            let mut minus = Vec::with_capacity(plus.len());
            minus.extend(ma.into_iter());
            minus.extend(pb.into_iter());
            minus.extend(pa.into_iter());
            minus.extend(mb.into_iter());
            Ok((plus, minus))
        }
        Tree::Mul3(..) => Err(Error::MalformedCircuit(
            "Ben-Or-Cleve expects an arity-2 formula".into(),
        )),
    }
}

/// Trace-style Ben-Or–Cleve with ε-approximation: the root is viewed as a
/// sum of products and leaves; each product g·h contributes the four-factor
/// block (id + ε g E_{12})(id + ε h E_{21})(id - ε g E_{12})(id - ε h E_{21})
/// which is id + ε² gh (E_11 - E_22) + O(ε³), and each leaf l contributes the
/// single factor id + ε² l E_11. With alpha = ε^{-2} the (1,1) entry of the
/// program tends to f.
///
/// The ε²-coefficient of any product of unipotent linear-entry factors is
/// traceless, so the trace of the program tends to 0, not f; the honest
/// readout is the (1,1) entry (the paper's trace phrasing does not survive
/// the determinant-one constraint).
pub fn ben_or_cleve_trace(c: &Circuit) -> Result<MatrixProgram> {
    if !c.is_ihl() {
        return Err(Error::MalformedCircuit("input must be IHL".into()));
    }
    let t = Tree::from_circuit(c)?;
    let order = c.order;
    let nvars = c.nvars;
    // split the root into summands
    let mut summands = Vec::new();
    collect_summands(&t, &mut summands);
    let eps = LaurentScalar::eps_pow(order, 1);
    let mut factors: Vec<Mat3> = Vec::new();
    for s in summands {
        match s {
            Tree::Mul(g, h) => {
                let ge = g.scaled(&eps);
                let he = h.scaled(&eps);
                let (pg, mg) = boc_rec(&ge, 0, 1, order, nvars)?;
                let (ph, mh) = boc_rec(&he, 1, 0, order, nvars)?;
                factors.extend(pg);
                factors.extend(ph);
                factors.extend(mg);
                factors.extend(mh);
            }
            Tree::Leaf(f, k) => {
                if !k.is_zero() {
                    return Err(Error::MalformedCircuit(
                        "IHL leaves carry no constant".into(),
                    ));
                }
                let f2 = f.scale(&LaurentScalar::eps_pow(order, 2));
                factors.push(e_entry(order, nvars, 0, 0, &f2));
            }
            other => {
                // nested additions were flattened; only products and leaves
                // remain
                return Err(Error::MalformedCircuit(format!(
                    "unexpected root summand: {other:?}"
                )));
            }
        }
    }
    Ok(MatrixProgram {
        dim: 3,
        factors,
        alpha: LaurentScalar::eps_pow(order, -2),
        position: ProgramPosition::Entry(0, 0),
    })
}

fn collect_summands(t: &Tree, out: &mut Vec<Tree>) {
    match t {
        Tree::Add(a, b) => {
            collect_summands(a, out);
            collect_summands(b, out);
        }
        other => out.push(other.clone()),
    }
}

/// Verify the per-block identity of the trace construction: each four-factor
/// block equals id + ε² hg (E_11 - E_22) + O(ε³).
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn verify_trace_block(
    g: &Tree,
    h: &Tree,
    order: u32,
    nvars: usize,
) -> Result<bool> {
    let eps = LaurentScalar::eps_pow(order, 1);
    let ge = g.scaled(&eps);
    let he = h.scaled(&eps);
    let (pg, mg) = boc_rec(&ge, 0, 1, order, nvars)?;
    let (ph, mh) = boc_rec(&he, 1, 0, order, nvars)?;
    let mut factors = pg;
    factors.extend(ph);
    factors.extend(mg);
    factors.extend(mh);
    let prog = MatrixProgram {
        dim: 3,
        factors,
        alpha: LaurentScalar::one(order),
        position: ProgramPosition::Entry(0, 0),
    };
    let m = prog.product_minus_id();
    let gv = g.to_circuit(order, nvars).eval_single()?;
    let hv = h.to_circuit(order, nvars).eval_single()?;
    let gh = gv.mul(&hv).scale(&LaurentScalar::eps_pow(order, 2));
    // entries minus expected must be O(eps^3)
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let expected = if i == 0 && j == 0 {
                gh.clone()
            } else if i == 1 && j == 1 {
                gh.neg()
            } else {
                Poly::zero(order, nvars)
            };
            let diff = entry.sub(&expected);
            if let Some(q) = diff.min_eps_order() {
                if q < 3 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ir::CircuitBuilder;

    fn leaf_circuit(n: usize) -> Circuit {
        let mut b = CircuitBuilder::new(1, n);
        let x = b.var(0);
        b.finish(vec![x])
    }

    #[test]
    fn single_leaf() {
        let c = leaf_circuit(1);
        let p = ben_or_cleve(&c, (0, 1)).unwrap();
        assert_eq!(p.factors.len(), 1);
        let m = p.product_minus_id();
        assert_eq!(m[0][1], Poly::var(1, 1, 0));
        assert!(m[0][0].is_zero() && m[1][1].is_zero() && m[2][2].is_zero());
    }

    #[test]
    fn addition_concatenates() {
        let mut b = CircuitBuilder::new(1, 2);
        let x = b.var(0);
        let y = b.var(1);
        let s = b.add(x, y);
        let c = b.finish(vec![s]);
        let p = ben_or_cleve(&c, (0, 1)).unwrap();
        assert_eq!(p.factors.len(), 2);
        assert_eq!(p.value(), Poly::var(1, 2, 0).add(&Poly::var(1, 2, 1)));
    }

    #[test]
    fn product_four_factors() {
        let mut b = CircuitBuilder::new(1, 2);
        let x = b.var(0);
        let y = b.var(1);
        let m = b.mul2(x, y);
        let c = b.finish(vec![m]);
        let p = ben_or_cleve(&c, (0, 2)).unwrap();
        assert_eq!(p.factors.len(), 4);
        let prod = p.product_minus_id();
        let xy = Poly::var(1, 2, 0).mul(&Poly::var(1, 2, 1));
        assert_eq!(prod[0][2], xy);
        // everything else vanishes
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) != (0, 2) {
                    assert!(prod[i][j].is_zero(), "entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn trace_construction_x_times_y() {
        let mut b = CircuitBuilder::new(1, 2);
        let x = b.var(0);
        let y = b.var(1);
        let m = b.mul2(x, y);
        let c = b.finish(vec![m]);
        let p = ben_or_cleve_trace(&c).unwrap();
        assert_eq!(p.factors.len(), 4);
        let xy = Poly::var(1, 2, 0).mul(&Poly::var(1, 2, 1));
        assert!(p.value().equiv_mod_eps(&xy));
    }

    #[test]
    fn trace_construction_sum_of_products() {
        // x1 y1 + x2 y2: eight factors, (1,1)-entry limit equals f
        let mut b = CircuitBuilder::new(1, 4);
        let x1 = b.var(0);
        let y1 = b.var(1);
        let x2 = b.var(2);
        let y2 = b.var(3);
        let m1 = b.mul2(x1, y1);
        let m2 = b.mul2(x2, y2);
        let s = b.add(m1, m2);
        let c = b.finish(vec![s]);
        let p = ben_or_cleve_trace(&c).unwrap();
        assert_eq!(p.factors.len(), 8);
        let f = c.eval_single().unwrap();
        assert!(p.value().equiv_mod_eps(&f));
        // the trace readout tends to zero, not f
        let tr = MatrixProgram {
            position: ProgramPosition::Trace,
            ..p.clone()
        };
        assert!(tr.value().equiv_mod_eps(&Poly::zero(1, 4)));
    }

    #[test]
    fn per_block_identity_verified() {
        use crate::circuit::ihl::Tree;
        let g = Tree::Leaf(LinearForm::var(1, 2, 0), LaurentScalar::zero(1));
        let h = Tree::Leaf(LinearForm::var(1, 2, 1), LaurentScalar::zero(1));
        assert!(verify_trace_block(&g, &h, 1, 2).unwrap());
    }

    #[test]
    fn zero_formula_empty_program() {
        let p = MatrixProgram {
            dim: 3,
            factors: vec![],
            alpha: LaurentScalar::eps_pow(1, -2),
            position: ProgramPosition::Entry(0, 0),
        };
        assert!(p.value().is_zero());
    }
}
