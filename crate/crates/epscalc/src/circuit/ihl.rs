use super::ir::{Circuit, CircuitBuilder, GateId, GateKind};
use crate::error::{Error, Result};
use crate::polyring::{LaurentScalar, LinearForm};

/// Internal tree form for formula rewrites. Leaves carry a linear form and a
/// constant; formulas have unit edge scales, so the tree is scale-free.
#[derive(Clone, Debug)]
pub(crate) enum Tree {
    Leaf(LinearForm, LaurentScalar),
    Add(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Mul3(Box<Tree>, Box<Tree>, Box<Tree>),
}

impl Tree {
    pub(crate) fn size(&self) -> usize {
        match self {
            Tree::Leaf(..) => 1,
            Tree::Add(a, b) | Tree::Mul(a, b) => 1 + a.size() + b.size(),
            Tree::Mul3(a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }

    pub(crate) fn from_circuit(c: &Circuit) -> Result<Tree> {
        if !c.is_formula() {
            return Err(Error::MalformedCircuit("not a formula".into()));
        }
        if c.outputs.len() != 1 {
            return Err(Error::MalformedCircuit("formula needs one output".into()));
        }
        let unit = |s: &LaurentScalar| -> Result<()> {
            if *s == LaurentScalar::one(s.order()) {
                Ok(())
            } else {
                Err(Error::MalformedCircuit(
                    "formulas carry unit edge scales".into(),
                ))
            }
        };
        fn build(
            c: &Circuit,
            id: GateId,
            unit: &dyn Fn(&LaurentScalar) -> Result<()>,
        ) -> Result<Tree> {
            Ok(match &c.gates[id] {
                GateKind::Input(f, k) => Tree::Leaf(f.clone(), k.clone()),
                GateKind::Add([a, b], [sa, sb]) => {
                    unit(sa)?;
                    unit(sb)?;
                    Tree::Add(
                        Box::new(build(c, *a, unit)?),
                        Box::new(build(c, *b, unit)?),
                    )
                }
                GateKind::Mul2([a, b], [sa, sb]) => {
                    unit(sa)?;
                    unit(sb)?;
                    Tree::Mul(
                        Box::new(build(c, *a, unit)?),
                        Box::new(build(c, *b, unit)?),
                    )
                }
                GateKind::Mul3([a, b, cc], [sa, sb, sc]) => {
                    unit(sa)?;
                    unit(sb)?;
                    unit(sc)?;
                    Tree::Mul3(
                        Box::new(build(c, *a, unit)?),
                        Box::new(build(c, *b, unit)?),
                        Box::new(build(c, *cc, unit)?),
                    )
                }
                GateKind::NegCube(..) => {
                    return Err(Error::MalformedCircuit(
                        "NegCube gates are circuit-only".into(),
                    ))
                }
            })
        }
        build(c, *c.outputs.last().unwrap(), &unit)
    }

    pub(crate) fn to_circuit(&self, order: u32, nvars: usize) -> Circuit {
        let mut b = CircuitBuilder::new(order, nvars);
        fn emit(t: &Tree, b: &mut CircuitBuilder) -> GateId {
            match t {
                Tree::Leaf(f, k) => b.input_affine(f.clone(), k.clone()),
                Tree::Add(x, y) => {
                    let (x, y) = (emit(x, b), emit(y, b));
                    b.add(x, y)
                }
                Tree::Mul(x, y) => {
                    let (x, y) = (emit(x, b), emit(y, b));
                    b.mul2(x, y)
                }
                Tree::Mul3(x, y, z) => {
                    let (x, y, z) = (emit(x, b), emit(y, b), emit(z, b));
                    b.mul3(x, y, z)
                }
            }
        }
        let out = emit(self, &mut b);
        b.finish(vec![out])
    }

    /// Scale a formula by a constant without gates: additions scale both
    /// children, products scale one child, leaves scale the label.
    pub(crate) fn scaled(&self, s: &LaurentScalar) -> Tree {
        match self {
            Tree::Leaf(f, k) => Tree::Leaf(f.scale(s), &*k * s),
            Tree::Add(a, b) => Tree::Add(Box::new(a.scaled(s)), Box::new(b.scaled(s))),
            Tree::Mul(a, b) => Tree::Mul(Box::new(a.scaled(s)), b.clone()),
            Tree::Mul3(a, b, c) => Tree::Mul3(Box::new(a.scaled(s)), b.clone(), c.clone()),
        }
    }
}

/// Brent's depth reduction for general arity-2 formulas (constants allowed):
/// output computes the same polynomial with depth O(log size).
pub fn brent_standard(c: &Circuit) -> Result<Circuit> {
    let t = Tree::from_circuit(c)?;
    let order = c.order;
    let r = brent_tree(&t, order);
    Ok(r.to_circuit(order, c.nvars))
}

#[derive(Clone, Copy, PartialEq)]
enum Step {
    AddL,
    AddR,
    MulL,
    MulR,
}

fn brent_tree(t: &Tree, order: u32) -> Tree {
    let s = t.size();
    if s <= 3 {
        return t.clone();
    }
    // walk down the larger child to a separator v with s/3 <= |v| <= 2s/3
    let mut path: Vec<Step> = Vec::new();
    let mut cur: &Tree = t;
    loop {
        let cs = cur.size();
        if 3 * cs <= 2 * s {
            break;
        }
        match cur {
            Tree::Leaf(..) => break,
            Tree::Add(a, b) => {
                if a.size() >= b.size() {
                    path.push(Step::AddL);
                    cur = a;
                } else {
                    path.push(Step::AddR);
                    cur = b;
                }
            }
            Tree::Mul(a, b) => {
                if a.size() >= b.size() {
                    path.push(Step::MulL);
                    cur = a;
                } else {
                    path.push(Step::MulR);
                    cur = b;
                }
            }
            Tree::Mul3(..) => unreachable!("brent_standard is for arity-2 formulas"),
        }
    }
    let v = cur.clone();
    // F(alpha) = alpha (F(1) - F(0)) + F(0) where alpha replaces <v>
    let f0 = substitute_const(t, &path, order, false);
    let f1 = substitute_const(t, &path, order, true);
    let rv = brent_tree(&v, order);
    let rf0 = brent_tree(&f0, order);
    let rf0b = rf0.clone();
    let rf1 = brent_tree(&f1, order);
    // alpha * (F1 - F0) + F0
    let diff = Tree::Add(
        Box::new(rf1),
        Box::new(rf0.scaled(&LaurentScalar::from_int(order, -1))),
    );
    Tree::Add(
        Box::new(Tree::Mul(Box::new(rv), Box::new(diff))),
        Box::new(rf0b),
    )
}

/// Replace the subtree at `path` by the constant 0 or 1.
fn substitute_const(t: &Tree, path: &[Step], order: u32, one: bool) -> Tree {
    if path.is_empty() {
        let c = if one {
            LaurentScalar::one(order)
        } else {
            LaurentScalar::zero(order)
        };
        return Tree::Leaf(LinearForm::zero(order, 0), c);
    }
    match (t, path[0]) {
        (Tree::Add(a, b), Step::AddL) => Tree::Add(
            Box::new(substitute_const(a, &path[1..], order, one)),
            b.clone(),
        ),
        (Tree::Add(a, b), Step::AddR) => Tree::Add(
            a.clone(),
            Box::new(substitute_const(b, &path[1..], order, one)),
        ),
        (Tree::Mul(a, b), Step::MulL) => Tree::Mul(
            Box::new(substitute_const(a, &path[1..], order, one)),
            b.clone(),
        ),
        (Tree::Mul(a, b), Step::MulR) => Tree::Mul(
            a.clone(),
            Box::new(substitute_const(b, &path[1..], order, one)),
        ),
        _ => unreachable!("path mismatch"),
    }
}

/// Input homogenization: produce an IHL circuit computing `f - f(0)`.
///
/// * circuit inputs: gate-by-gate split into (constant part, reduced part)
///   with constants folded into edge scales; size at most 6s, depth at most 3s.
/// * formula inputs: Brent's depth reduction first, then the same split with
///   subtree copying and leaf rescaling, keeping the result a formula of
///   polynomial size and logarithmic depth.
pub fn ihl_homogenize(c: &Circuit) -> Result<Circuit> {
    if c.is_formula() && c.outputs.len() == 1 {
        let reduced = brent_standard(c)?;
        let t = Tree::from_circuit(&reduced)?;
        let order = c.order;
        let hat = hat_tree(&t, order);
        let out = match hat {
            Some(h) => h.to_circuit(order, c.nvars),
            None => zero_circuit(order, c.nvars),
        };
        return Ok(out);
    }
    ihl_circuit(c)
}

/// The reduced part of a formula as a formula (None when it vanishes);
/// constants are pushed into leaf rescalings.
fn hat_tree(t: &Tree, order: u32) -> Option<Tree> {
    match eval_hat(t, order) {
        (_, Some(h)) => Some(h),
        (_, None) => None,
    }
}

/// Returns (constant part, reduced part as a formula).
fn eval_hat(t: &Tree, order: u32) -> (LaurentScalar, Option<Tree>) {
    match t {
        Tree::Leaf(f, k) => {
            let hat = if f.is_zero() {
                None
            } else {
                Some(Tree::Leaf(f.clone(), LaurentScalar::zero(order)))
            };
            (k.clone(), hat)
        }
        Tree::Add(a, b) => {
            let (ka, ha) = eval_hat(a, order);
            let (kb, hb) = eval_hat(b, order);
            let hat = match (ha, hb) {
                (None, None) => None,
                (Some(x), None) | (None, Some(x)) => Some(x),
                (Some(x), Some(y)) => Some(Tree::Add(Box::new(x), Box::new(y))),
            };
            (&ka + &kb, hat)
        }
        Tree::Mul(a, b) => {
            let (ka, ha) = eval_hat(a, order);
            let (kb, hb) = eval_hat(b, order);
            // hat(ab) = ka*hb + hb-free terms: ka hb + kb ha + ha hb
            let mut terms: Vec<Tree> = Vec::new();
            if let Some(hb2) = &hb {
                if !ka.is_zero() {
                    terms.push(hb2.scaled(&ka));
                }
            }
            if let Some(ha2) = &ha {
                if !kb.is_zero() {
                    terms.push(ha2.scaled(&kb));
                }
            }
            if let (Some(ha2), Some(hb2)) = (&ha, &hb) {
                terms.push(Tree::Mul(Box::new(ha2.clone()), Box::new(hb2.clone())));
            }
            let hat = terms.into_iter().reduce(|x, y| Tree::Add(Box::new(x), Box::new(y)));
            (&ka * &kb, hat)
        }
        Tree::Mul3(..) => unreachable!("arity-3 gates do not appear in standard formulas"),
    }
}

fn zero_circuit(order: u32, nvars: usize) -> Circuit {
    // the zero polynomial as an empty-sum circuit: a single zero input would
    // violate IHL, so encode as x - x on the first variable when available
    let mut b = CircuitBuilder::new(order, nvars.max(1));
    let x = b.var(0);
    let one = LaurentScalar::one(order);
    let neg = LaurentScalar::from_int(order, -1);
    let z = b.add_scaled(x, one, x, neg);
    b.finish(vec![z])
}

/// Circuit-case input homogenization with edge-scale folding.
fn ihl_circuit(c: &Circuit) -> Result<Circuit> {
    c.validate()?;
    let order = c.order;
    let mut b = CircuitBuilder::new(order, c.nvars);
    // per original gate: (constant value, optional reduced gate id with scale)
    let mut info: Vec<(LaurentScalar, Option<(GateId, LaurentScalar)>)> = Vec::new();
    let one = || LaurentScalar::one(order);
    for g in &c.gates {
        let entry = match g {
            GateKind::Input(f, k) => {
                let hat = if f.is_zero() {
                    None
                } else {
                    Some((b.input(f.clone()), one()))
                };
                (k.clone(), hat)
            }
            GateKind::Add([x, y], [sx, sy]) => {
                let (kx, hx) = info[*x].clone();
                let (ky, hy) = info[*y].clone();
                let k = &(&kx * sx) + &(&ky * sy);
                let hat = match (hx, hy) {
                    (None, None) => None,
                    (Some((g1, s1)), None) => Some((g1, &s1 * sx)),
                    (None, Some((g2, s2))) => Some((g2, &s2 * sy)),
                    (Some((g1, s1)), Some((g2, s2))) => {
                        Some((b.add_scaled(g1, &s1 * sx, g2, &s2 * sy), one()))
                    }
                };
                (k, hat)
            }
            GateKind::Mul2([x, y], [sx, sy]) => {
                let (kx, hx) = info[*x].clone();
                let (ky, hy) = info[*y].clone();
                let k = &(&kx * sx) * &(&ky * sy);
                let mut parts: Vec<(GateId, LaurentScalar)> = Vec::new();
                if let Some((g2, s2)) = &hy {
                    let coef = &(&kx * sx) * &(s2 * sy);
                    if !coef.is_zero() {
                        parts.push((*g2, coef));
                    }
                }
                if let Some((g1, s1)) = &hx {
                    let coef = &(&ky * sy) * &(s1 * sx);
                    if !coef.is_zero() {
                        parts.push((*g1, coef));
                    }
                }
                if let (Some((g1, s1)), Some((g2, s2))) = (&hx, &hy) {
                    let m = b.push_mul2(*g1, &(s1 * sx), *g2, &(s2 * sy));
                    parts.push((m, one()));
                }
                let hat = match parts.len() {
                    0 => None,
                    1 => Some(parts.pop().unwrap()),
                    _ => {
                        let mut it = parts.into_iter();
                        let (g0, s0) = it.next().unwrap();
                        let mut acc = (g0, s0);
                        for (gi, si) in it {
                            acc = (b.add_scaled(acc.0, acc.1, gi, si), one());
                        }
                        Some(acc)
                    }
                };
                (k, hat)
            }
            GateKind::Mul3([x, y, z], [sx, sy, sz]) => {
                // expand as ((x*y)*z) in the split
                let (kx, hx) = info[*x].clone();
                let (ky, hy) = info[*y].clone();
                let (kz, hz) = info[*z].clone();
                let kxy = &(&kx * sx) * &(&ky * sy);
                // reduced part of x*y
                let mut xy_parts: Vec<(GateId, LaurentScalar)> = Vec::new();
                if let Some((g2, s2)) = &hy {
                    let coef = &(&kx * sx) * &(s2 * sy);
                    if !coef.is_zero() {
                        xy_parts.push((*g2, coef));
                    }
                }
                if let Some((g1, s1)) = &hx {
                    let coef = &(&ky * sy) * &(s1 * sx);
                    if !coef.is_zero() {
                        xy_parts.push((*g1, coef));
                    }
                }
                if let (Some((g1, s1)), Some((g2, s2))) = (&hx, &hy) {
                    let m = b.push_mul2(*g1, &(s1 * sx), *g2, &(s2 * sy));
                    xy_parts.push((m, one()));
                }
                let hxy = match xy_parts.len() {
                    0 => None,
                    1 => Some(xy_parts.pop().unwrap()),
                    _ => {
                        let mut it = xy_parts.into_iter();
                        let mut acc = it.next().unwrap();
                        for (gi, si) in it {
                            acc = (b.add_scaled(acc.0, acc.1, gi, si), one());
                        }
                        Some(acc)
                    }
                };
                let k = &kxy * &(&kz * sz);
                let mut parts: Vec<(GateId, LaurentScalar)> = Vec::new();
                if let Some((g2, s2)) = &hz {
                    let coef = &kxy * &(s2 * sz);
                    if !coef.is_zero() {
                        parts.push((*g2, coef));
                    }
                }
                if let Some((g1, s1)) = &hxy {
                    let coef = &(&kz * sz) * s1;
                    if !coef.is_zero() {
                        parts.push((*g1, coef));
                    }
                }
                if let (Some((g1, s1)), Some((g2, s2))) = (&hxy, &hz) {
                    let m = b.push_mul2(*g1, s1, *g2, &(s2 * sz));
                    parts.push((m, one()));
                }
                let hat = match parts.len() {
                    0 => None,
                    1 => Some(parts.pop().unwrap()),
                    _ => {
                        let mut it = parts.into_iter();
                        let mut acc = it.next().unwrap();
                        for (gi, si) in it {
                            acc = (b.add_scaled(acc.0, acc.1, gi, si), one());
                        }
                        Some(acc)
                    }
                };
                (k, hat)
            }
            GateKind::NegCube(x, sx) => {
                let (kx, hx) = info[*x].clone();
                let kxs = &kx * sx;
                let k = (&(&kxs * &kxs) * &kxs).scale_rat(&crate::polyring::rat_int(-1));
                let hat = match hx {
                    None => None,
                    Some((g1, s1)) => {
                        // -(k + h)^3 + k^3 = -(3k^2 h + 3k h^2 + h^3)
                        let s1x = &s1 * sx;
                        let h2 = b.push_mul2(g1, &s1x, g1, &s1x);
                        let h3 = b.push_mul2(h2, &one(), g1, &s1x);
                        let three = LaurentScalar::from_int(order, 3);
                        let t1 = &(&(&kxs * &kxs) * &three) * &s1x;
                        let t2 = &(&kxs * &three) * &one();
                        // sum: t1*h + t2*h2 + h3, then negate
                        let s12 = b.add_scaled(g1, t1, h2, t2);
                        let sall = b.add_scaled(s12, one(), h3, one());
                        Some((sall, LaurentScalar::from_int(order, -1)))
                    }
                };
                (k, hat)
            }
        };
        info.push(entry);
    }
    let mut outputs = Vec::with_capacity(c.outputs.len());
    for &o in &c.outputs {
        match &info[o].1 {
            Some((g, s)) => {
                if *s == one() {
                    outputs.push(*g);
                } else {
                    outputs.push(b.scaled(*g, s.clone()));
                }
            }
            None => {
                let z = {
                    let x = b.var(0);
                    b.add_scaled(x, one(), x, LaurentScalar::from_int(order, -1))
                };
                outputs.push(z);
            }
        }
    }
    Ok(b.finish(outputs))
}

impl CircuitBuilder {
    fn push_mul2(
        &mut self,
        a: GateId,
        sa: &LaurentScalar,
        b: GateId,
        sb: &LaurentScalar,
    ) -> GateId {
        self.push_gate(GateKind::Mul2([a, b], [sa.clone(), sb.clone()]))
    }
}
