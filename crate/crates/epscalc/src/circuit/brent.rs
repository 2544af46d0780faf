use super::ihl::Tree;
use super::ir::Circuit;
use crate::error::{Error, Result};

/// Recorded depth-bound constants for the `Depth(s) <= Depth(2s/3) + 2`
/// recurrence: slack +2 inside the shrink and base cases returned as-is.
pub fn brent_depth_bound(s: usize) -> usize {
    if s <= 6 {
        return s;
    }
    brent_depth_bound(2 * s / 3 + 2) + 2
}

/// Brent's depth reduction for IHL formulas over the arity-3 basis.
///
/// A separator subformula `v` is located by walking the largest child while
/// the subtree exceeds 2s/3. The product context of v is linearized with
/// `F(alpha, beta) = alpha beta (F(1,1) - F(0,0)) + F(0,0)` where alpha and
/// beta replace two factors of the nearest product above v (substituting two
/// 1s keeps the arity-3 basis and IHL-ness: the product collapses to its
/// remaining factor). Addition chains between v and the product distribute
/// first, copying the sibling factors.
pub fn brent_arity3(c: &Circuit) -> Result<Circuit> {
    if !c.is_ihl() {
        return Err(Error::MalformedCircuit("input must be IHL".into()));
    }
    if !c.is_arity3() {
        return Err(Error::MalformedCircuit(
            "input must be over the arity-3 basis".into(),
        ));
    }
    let t = Tree::from_circuit(c)?;
    let order = c.order;
    let out = brent3(&t, order);
    let result = out.to_circuit(order, c.nvars);
    debug_assert!(result.is_formula() && result.is_arity3() && result.is_ihl());
    Ok(result)
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Step {
    AddL,
    AddR,
    Mul0,
    Mul1,
    Mul2,
}

fn child<'a>(t: &'a Tree, s: Step) -> &'a Tree {
    match (t, s) {
        (Tree::Add(a, _), Step::AddL) => a,
        (Tree::Add(_, b), Step::AddR) => b,
        (Tree::Mul3(a, _, _), Step::Mul0) => a,
        (Tree::Mul3(_, b, _), Step::Mul1) => b,
        (Tree::Mul3(_, _, c), Step::Mul2) => c,
        _ => unreachable!("path mismatch"),
    }
}

fn subtree_at<'a>(t: &'a Tree, path: &[Step]) -> &'a Tree {
    path.iter().fold(t, |acc, &s| child(acc, s))
}

/// Replace the subtree at `path` by `new`; None means the zero polynomial and
/// collapses additions and kills products on the way back up. Returns None
/// when the whole formula vanishes.
fn replace_at(t: &Tree, path: &[Step], new: &Option<Tree>) -> Option<Tree> {
    if path.is_empty() {
        return new.clone();
    }
    let rebuild = |other: Option<Tree>| other;
    match (t, path[0]) {
        (Tree::Add(a, b), Step::AddL) => match replace_at(a, &path[1..], new) {
            Some(na) => Some(Tree::Add(Box::new(na), b.clone())),
            None => rebuild(Some((**b).clone())),
        },
        (Tree::Add(a, b), Step::AddR) => match replace_at(b, &path[1..], new) {
            Some(nb) => Some(Tree::Add(a.clone(), Box::new(nb))),
            None => rebuild(Some((**a).clone())),
        },
        (Tree::Mul3(a, b, c), Step::Mul0) => {
            let na = replace_at(a, &path[1..], new)?;
            Some(Tree::Mul3(Box::new(na), b.clone(), c.clone()))
        }
        (Tree::Mul3(a, b, c), Step::Mul1) => {
            let nb = replace_at(b, &path[1..], new)?;
            Some(Tree::Mul3(a.clone(), Box::new(nb), c.clone()))
        }
        (Tree::Mul3(a, b, c), Step::Mul2) => {
            let nc = replace_at(c, &path[1..], new)?;
            Some(Tree::Mul3(a.clone(), b.clone(), Box::new(nc)))
        }
        _ => unreachable!("path mismatch"),
    }
}

/// Negate an arity-3 IHL formula by negating one factor per product.
fn negate3(t: &Tree) -> Tree {
    match t {
        Tree::Leaf(f, k) => Tree::Leaf(f.neg(), -k),
        Tree::Add(a, b) => Tree::Add(Box::new(negate3(a)), Box::new(negate3(b))),
        Tree::Mul3(a, b, c) => Tree::Mul3(Box::new(negate3(a)), b.clone(), c.clone()),
        Tree::Mul(a, b) => Tree::Mul(Box::new(negate3(a)), b.clone()),
    }
}

/// Separate `t` into (subtree at addition-only path, remaining additions).
fn split_addition(t: &Tree, path: &[Step]) -> (Tree, Option<Tree>) {
    if path.is_empty() {
        return (t.clone(), None);
    }
    match (t, path[0]) {
        (Tree::Add(a, b), Step::AddL) => {
            let (v, h) = split_addition(a, &path[1..]);
            let rest = match h {
                None => (**b).clone(),
                Some(h) => Tree::Add(Box::new(h), b.clone()),
            };
            (v, Some(rest))
        }
        (Tree::Add(a, b), Step::AddR) => {
            let (v, h) = split_addition(b, &path[1..]);
            let rest = match h {
                None => (**a).clone(),
                Some(h) => Tree::Add(Box::new((**a).clone()), Box::new(h)),
            };
            (v, Some(rest))
        }
        _ => unreachable!("addition-only path expected"),
    }
}

fn brent3(t: &Tree, order: u32) -> Tree {
    let s = t.size();
    if s <= 9 {
        return t.clone();
    }
    // walk the largest child while the subtree exceeds 2s/3
    let mut path: Vec<Step> = Vec::new();
    let mut cur: &Tree = t;
    while 3 * cur.size() > 2 * s {
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
            Tree::Mul3(a, b, c) => {
                let (sa, sb, sc) = (a.size(), b.size(), c.size());
                if sa >= sb && sa >= sc {
                    path.push(Step::Mul0);
                    cur = a;
                } else if sb >= sc {
                    path.push(Step::Mul1);
                    cur = b;
                } else {
                    path.push(Step::Mul2);
                    cur = c;
                }
            }
            Tree::Mul(..) => unreachable!("arity-2 products are excluded"),
        }
    }
    if 3 * cur.size() < s && !path.is_empty() {
        // jumped below s/3 at a product parent: substitute its two largest
        // children, the smallest survives (additions can only jump by integer
        // rounding on tiny sizes, where the standard case still terminates)
        let p_path = &path[..path.len() - 1];
        let p = subtree_at(t, p_path);
        if let Tree::Mul3(a, b, c) = p {
            let mut kids: Vec<(usize, &Tree)> =
                vec![(0, a.as_ref()), (1, b.as_ref()), (2, c.as_ref())];
            kids.sort_by_key(|(_, k)| std::cmp::Reverse(k.size()));
            let (v, x, y) = (kids[0].1.clone(), kids[1].1.clone(), kids[2].1.clone());
            return assemble(t, p_path, &v, &x, &y, None, order);
        }
    }
    let v = cur.clone();
    let prod_pos = path
        .iter()
        .rposition(|st| matches!(st, Step::Mul0 | Step::Mul1 | Step::Mul2));
    match prod_pos {
        None => {
            // addition-only context: F = v + F(v -> 0)
            let rv = brent3(&v, order);
            match replace_at(t, &path, &None) {
                Some(rest) => Tree::Add(Box::new(rv), Box::new(brent3(&rest, order))),
                None => rv,
            }
        }
        Some(pos) => {
            let p_path = &path[..pos];
            let p = subtree_at(t, p_path);
            let Tree::Mul3(a, b, c) = p else {
                unreachable!("path names a product")
            };
            let (x_raw, y_raw) = match path[pos] {
                Step::Mul0 => (b.as_ref(), c.as_ref()),
                Step::Mul1 => (a.as_ref(), c.as_ref()),
                Step::Mul2 => (a.as_ref(), b.as_ref()),
                _ => unreachable!(),
            };
            // substitute (v, larger sibling); the smaller sibling survives,
            // keeping the copied branch small
            let (x, y) = if x_raw.size() >= y_raw.size() {
                (x_raw.clone(), y_raw.clone())
            } else {
                (y_raw.clone(), x_raw.clone())
            };
            // additions between p and v distribute with copies of x and y
            let inner = child(p, path[pos]);
            let (v_tree, h) = split_addition(inner, &path[pos + 1..]);
            debug_assert_eq!(v_tree.size(), v.size());
            assemble(t, p_path, &v, &x, &y, h, order)
        }
    }
}

/// Build `Add(Mul3(B(v), B(x), Add(B(F11), -B(F00))), B(F00))` where the
/// node at `p_path` becomes `h x y` (F00) or `y + h x y` (F11); without an
/// addition remainder h the product is removed (F00) or collapses to y (F11).
fn assemble(
    t: &Tree,
    p_path: &[Step],
    v: &Tree,
    x: &Tree,
    y: &Tree,
    h: Option<Tree>,
    order: u32,
) -> Tree {
    let node00 = h.as_ref().map(|h| {
        Tree::Mul3(
            Box::new(h.clone()),
            Box::new(x.clone()),
            Box::new(y.clone()),
        )
    });
    let node11 = Some(match &node00 {
        Some(hxy) => Tree::Add(Box::new(y.clone()), Box::new(hxy.clone())),
        None => y.clone(),
    });
    let f00 = replace_at(t, p_path, &node00);
    let f11 = replace_at(t, p_path, &node11);
    let rv = brent3(v, order);
    let rx = brent3(x, order);
    let rf00 = f00.map(|f| brent3(&f, order));
    let rf11 = f11.map(|f| brent3(&f, order));
    let diff = match (&rf11, &rf00) {
        (Some(a), Some(b)) => Some(Tree::Add(Box::new(a.clone()), Box::new(negate3(b)))),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(negate3(b)),
        (None, None) => None,
    };
    let prod = diff.map(|d| Tree::Mul3(Box::new(rv), Box::new(rx), Box::new(d)));
    match (prod, rf00) {
        (Some(p), Some(f)) => Tree::Add(Box::new(p), Box::new(f)),
        (Some(p), None) => p,
        (None, Some(f)) => f,
        (None, None) => unreachable!("F vanishes identically only if v*x*0"),
    }
}
