use super::ihl::{ihl_homogenize, Tree};
use super::ir::{Circuit, CircuitBuilder, GateId, GateKind};
use crate::error::{Error, Result};
use crate::polyring::{Degree, LaurentScalar, LinearForm};

/// Parity-pure formula: every node computes a polynomial whose homogeneous
/// components are all odd or all even.
#[derive(Clone)]
enum Parity {
    Odd(Tree),
    Even(Tree),
    Both(Tree, Tree),
    Zero,
}

/// Split an IHL formula so that every node is parity-pure, copying subtrees
/// where a product needs both parts.
fn parity_split(t: &Tree) -> Parity {
    match t {
        Tree::Leaf(..) => Parity::Odd(t.clone()),
        Tree::Add(a, b) => {
            let (ao, ae) = parts(parity_split(a));
            let (bo, be) = parts(parity_split(b));
            let odd = join_add(ao, bo);
            let even = join_add(ae, be);
            from_parts(odd, even)
        }
        Tree::Mul(a, b) => {
            let (ao, ae) = parts(parity_split(a));
            let (bo, be) = parts(parity_split(b));
            // (fg)_even = f_e g_e + f_o g_o ; (fg)_odd = f_e g_o + f_o g_e
            let even = join_add(join_mul(&ae, &be), join_mul(&ao, &bo));
            let odd = join_add(join_mul(&ae, &bo), join_mul(&ao, &be));
            from_parts(odd, even)
        }
        Tree::Mul3(..) => unreachable!("parity split expects arity-2 formulas"),
    }
}

fn parts(p: Parity) -> (Option<Tree>, Option<Tree>) {
    match p {
        Parity::Odd(t) => (Some(t), None),
        Parity::Even(t) => (None, Some(t)),
        Parity::Both(o, e) => (Some(o), Some(e)),
        Parity::Zero => (None, None),
    }
}

fn from_parts(odd: Option<Tree>, even: Option<Tree>) -> Parity {
    match (odd, even) {
        (Some(o), Some(e)) => Parity::Both(o, e),
        (Some(o), None) => Parity::Odd(o),
        (None, Some(e)) => Parity::Even(e),
        (None, None) => Parity::Zero,
    }
}

fn join_add(a: Option<Tree>, b: Option<Tree>) -> Option<Tree> {
    match (a, b) {
        (Some(x), Some(y)) => Some(Tree::Add(Box::new(x), Box::new(y))),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn join_mul(a: &Option<Tree>, b: &Option<Tree>) -> Option<Tree> {
    match (a, b) {
        (Some(x), Some(y)) => Some(Tree::Mul(Box::new(x.clone()), Box::new(y.clone()))),
        _ => None,
    }
}

/// Convert a parity-pure formula into an arity-3 circuit: odd nodes compute
/// themselves, even nodes compute z·(value) for the dummy variable z (index
/// nvars); the z leaves of an even factor are later rewired to the output of
/// its odd partner, which requires the input to be a formula.
fn to_arity3_rec(t: &Tree, b: &mut CircuitBuilder, z_index: usize) -> Result<(GateId, bool)> {
    // returns (gate, is_even): even gates compute z * value
    match t {
        Tree::Leaf(f, k) => {
            if !k.is_zero() {
                return Err(Error::MalformedCircuit("IHL leaves carry no constant".into()));
            }
            Ok((b.input(f.clone()), false))
        }
        Tree::Add(x, y) => {
            let (gx, ex) = to_arity3_rec(x, b, z_index)?;
            let (gy, ey) = to_arity3_rec(y, b, z_index)?;
            if ex != ey {
                return Err(Error::MalformedCircuit(
                    "addition of mixed parities after split".into(),
                ));
            }
            Ok((b.add(gx, gy), ex))
        }
        Tree::Mul(x, y) => {
            // build the factor whose output feeds the other one first, so
            // that the z-rewiring keeps the topological order
            let (px, py) = (parity_of(x), parity_of(y));
            match (px, py) {
                (false, false) => {
                    let (gx, _) = to_arity3_rec(x, b, z_index)?;
                    let (gy, _) = to_arity3_rec(y, b, z_index)?;
                    // odd*odd = even: z * f * g
                    let z = b.var(z_index);
                    Ok((b.mul3(z, gx, gy), true))
                }
                (false, true) => {
                    let (gx, _) = to_arity3_rec(x, b, z_index)?;
                    let (gy, _) = to_arity3_rec(y, b, z_index)?;
                    // odd*even: replace z leaves of the even side by gx
                    rewire_z(b, gy, gx, z_index);
                    Ok((gy, false))
                }
                (true, false) => {
                    let (gy, _) = to_arity3_rec(y, b, z_index)?;
                    let (gx, _) = to_arity3_rec(x, b, z_index)?;
                    rewire_z(b, gx, gy, z_index);
                    Ok((gx, false))
                }
                (true, true) => {
                    let (gx, _) = to_arity3_rec(x, b, z_index)?;
                    let (gy, _) = to_arity3_rec(y, b, z_index)?;
                    // even*even: z f g from (z f)(z g): replace z of gy by gx
                    rewire_z(b, gy, gx, z_index);
                    Ok((gy, true))
                }
            }
        }
        Tree::Mul3(..) => unreachable!(),
    }
}

/// Parity of a parity-pure formula: true = even. Leaves are odd; a product
/// is even exactly when its factors share a parity (odd+odd or even+even).
fn parity_of(t: &Tree) -> bool {
    match t {
        Tree::Leaf(..) => false,
        Tree::Add(a, _) => parity_of(a),
        Tree::Mul(a, b) => parity_of(a) == parity_of(b),
        Tree::Mul3(..) => unreachable!(),
    }
}

/// Replace every z input-leaf in the subcircuit rooted at `root` by the gate
/// `feed`. Sound because subcircuits produced by the conversion are disjoint
/// (the source was a formula) and z never occurs inside non-trivial forms.
fn rewire_z(b: &mut CircuitBuilder, root: GateId, feed: GateId, z_index: usize) {
    // collect the subcircuit of `root`
    let mut stack = vec![root];
    let mut seen = std::collections::HashSet::new();
    let mut z_leaves = Vec::new();
    while let Some(g) = stack.pop() {
        if !seen.insert(g) {
            continue;
        }
        let kind = b.gate(g).clone();
        if let GateKind::Input(f, _) = &kind {
            if is_z_leaf(f, z_index) {
                z_leaves.push(g);
            }
        }
        stack.extend(kind.children());
    }
    for g in z_leaves {
        b.replace_with_alias(g, feed);
    }
}

fn is_z_leaf(f: &LinearForm, z_index: usize) -> bool {
    (0..f.nvars()).all(|i| {
        if i == z_index {
            f.coeff(i) == LaurentScalar::one(f.coeff(i).order())
        } else {
            f.coeff(i).is_zero()
        }
    }) && !f.coeff(z_index).is_zero()
}

/// Convert a homogeneous IHL formula to a multi-output circuit over the
/// arity-3 basis: an odd-degree polynomial is computed directly at a single
/// output; an even-degree polynomial is represented by one output per
/// first-order partial derivative.
pub fn to_arity3(c: &Circuit) -> Result<Circuit> {
    if !c.is_formula() || c.outputs.len() != 1 {
        return Err(Error::MalformedCircuit("input must be a formula".into()));
    }
    if !c.is_ihl() {
        return Err(Error::MalformedCircuit("input must be IHL".into()));
    }
    let f = c.eval_single()?;
    let d = match f.degree() {
        Degree::Any => 1, // zero polynomial, treat as odd
        Degree::Of(d) => {
            if !f.is_homogeneous() {
                return Err(Error::NonHomogeneous);
            }
            d
        }
    };
    if d % 2 == 1 {
        let t = Tree::from_circuit(c)?;
        odd_to_arity3(&t, c.order, c.nvars)
    } else {
        // one output per partial derivative; each partial gets its own
        // formula (derivative of a formula), homogenized and converted
        let t = Tree::from_circuit(c)?;
        let mut builder = CircuitBuilder::new(c.order, c.nvars + 1);
        let mut outputs = Vec::new();
        for i in 0..c.nvars {
            let dt = derivative(&t, i, c.order);
            let dcirc = match dt {
                None => continue,
                Some(dt) => dt.to_circuit(c.order, c.nvars),
            };
            let ihl = ihl_homogenize(&dcirc)?;
            let sub = {
                let tt = Tree::from_circuit(&ihl)?;
                odd_to_arity3(&tt, c.order, c.nvars)?
            };
            let map = builder.splice(&sub);
            outputs.push(map[sub.outputs[0]]);
        }
        if outputs.is_empty() {
            return Err(Error::MalformedCircuit("all partials vanish".into()));
        }
        Ok(builder.finish(outputs))
    }
}

fn odd_to_arity3(t: &Tree, order: u32, nvars: usize) -> Result<Circuit> {
    let z_index = nvars;
    let mut b = CircuitBuilder::new(order, nvars + 1);
    let split = parity_split(t);
    let (odd, _even) = parts(split);
    let Some(odd) = odd else {
        return Err(Error::MalformedCircuit("odd part vanishes".into()));
    };
    let (g, is_even) = to_arity3_rec(&odd, &mut b, z_index)?;
    if is_even {
        return Err(Error::MalformedCircuit("expected odd output".into()));
    }
    Ok(b.finish(vec![g]))
}

/// Formal derivative of a formula with respect to variable i (product rule
/// duplicates subtrees); None when it vanishes identically.
fn derivative(t: &Tree, i: usize, order: u32) -> Option<Tree> {
    match t {
        Tree::Leaf(f, _) => {
            let c = f.coeff(i);
            if c.is_zero() {
                None
            } else {
                Some(Tree::Leaf(LinearForm::zero(order, 0), c))
            }
        }
        Tree::Add(a, b) => join_add(derivative(a, i, order), derivative(b, i, order)),
        Tree::Mul(a, b) => {
            let da = derivative(a, i, order)
                .map(|d| Tree::Mul(Box::new(d), b.clone()));
            let db = derivative(b, i, order)
                .map(|d| Tree::Mul(Box::new((**a).clone()), Box::new(d)));
            join_add(da, db)
        }
        Tree::Mul3(..) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Poly;

    fn leaf(i: usize, n: usize) -> Tree {
        Tree::Leaf(LinearForm::var(1, n, i), LaurentScalar::zero(1))
    }

    #[test]
    fn odd_product_direct() {
        // xyz becomes a Mul3-backed circuit computing xyz
        let t = Tree::Mul(
            Box::new(Tree::Mul(Box::new(leaf(0, 3)), Box::new(leaf(1, 3)))),
            Box::new(leaf(2, 3)),
        );
        let c = t.to_circuit(1, 3);
        let out = to_arity3(&c).unwrap();
        assert!(out.is_arity3() && out.is_ihl());
        let expect = Poly::var(1, 3, 0)
            .mul(&Poly::var(1, 3, 1))
            .mul(&Poly::var(1, 3, 2));
        assert_eq!(out.eval_single().unwrap().with_nvars(4), expect.with_nvars(4));
    }

    #[test]
    fn even_gives_partials() {
        // f = xy: outputs are the partials (y, x)
        let t = Tree::Mul(Box::new(leaf(0, 2)), Box::new(leaf(1, 2)));
        let c = t.to_circuit(1, 2);
        let out = to_arity3(&c).unwrap();
        assert!(out.is_arity3() && out.is_ihl());
        let vals = out.eval().unwrap();
        assert_eq!(vals.len(), 2);
        assert_eq!(vals[0], Poly::var(1, 2, 1).with_nvars(3));
        assert_eq!(vals[1], Poly::var(1, 2, 0).with_nvars(3));
    }

    #[test]
    fn random_odd_formulas() {
        use crate::circuit::brent::testutil::make_rng;
        // random arity-2 IHL formulas of odd total degree, built as products
        // and sums of leaves with degree bookkeeping
        fn random_tree(
            rng: &mut dyn FnMut() -> u64,
            nvars: usize,
            degree: usize,
            budget: &mut usize,
        ) -> Tree {
            if degree == 1 {
                if *budget > 2 && rng() % 3 == 0 {
                    *budget -= 2;
                    return Tree::Add(
                        Box::new(random_tree(rng, nvars, 1, budget)),
                        Box::new(random_tree(rng, nvars, 1, budget)),
                    );
                }
                return super::super::brent::testutil::random_leaf(rng, nvars, 1);
            }
            if *budget > 2 && rng() % 3 == 0 {
                *budget -= 2;
                return Tree::Add(
                    Box::new(random_tree(rng, nvars, degree, budget)),
                    Box::new(random_tree(rng, nvars, degree, budget)),
                );
            }
            *budget = budget.saturating_sub(2);
            let d1 = 1 + (rng() % (degree as u64 - 1)) as usize;
            let d2 = degree - d1;
            Tree::Mul(
                Box::new(random_tree(rng, nvars, d1, budget)),
                Box::new(random_tree(rng, nvars, d2, budget)),
            )
        }
        for seed in 0..20u64 {
            let mut rng = make_rng(seed + 1000);
            let mut budget = 40usize;
            let degree = [3usize, 5][(seed % 2) as usize];
            let t = random_tree(&mut rng, 3, degree, &mut budget);
            let c = t.to_circuit(1, 3);
            let f = c.eval_single().unwrap();
            if !f.is_homogeneous() || f.is_zero() {
                continue;
            }
            let out = to_arity3(&c).unwrap();
            assert!(out.is_arity3() && out.is_ihl(), "seed {seed}");
            assert!(out.size() <= c.size() * 8, "size blowup at seed {seed}");
            let got = out.eval_single().unwrap();
            assert_eq!(got, f.with_nvars(4), "seed {seed}");
        }
    }
}
