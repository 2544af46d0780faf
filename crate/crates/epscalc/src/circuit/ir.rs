use crate::error::{Error, Result};
use crate::polyring::{LaurentScalar, LinearForm, Poly};

pub type GateId = usize;

/// One gate of an arithmetic circuit. Children are indices of earlier gates;
/// each child edge carries a field-constant scale (unit scales for formulas).
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    /// An input leaf: a homogeneous linear form plus a constant. IHL circuits
    /// have constant zero and nonzero form.
    Input(LinearForm, LaurentScalar),
    Add([GateId; 2], [LaurentScalar; 2]),
    Mul2([GateId; 2], [LaurentScalar; 2]),
    Mul3([GateId; 3], [LaurentScalar; 3]),
    /// x ↦ -x^3
    NegCube(GateId, LaurentScalar),
}

impl GateKind {
    pub fn children(&self) -> Vec<GateId> {
        match self {
            GateKind::Input(..) => vec![],
            GateKind::Add(c, _) | GateKind::Mul2(c, _) => c.to_vec(),
            GateKind::Mul3(c, _) => c.to_vec(),
            GateKind::NegCube(c, _) => vec![*c],
        }
    }
}

/// A gate DAG in topological order (children precede parents) with explicit
/// output gates; multi-output circuits represent even-degree polynomials
/// through their first-order partials.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub nvars: usize,
    pub order: u32,
    pub gates: Vec<GateKind>,
    pub outputs: Vec<GateId>,
}

impl Circuit {
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            for c in g.children() {
                if c >= i {
                    return Err(Error::MalformedCircuit(format!(
                        "gate {i} references later gate {c}"
                    )));
                }
            }
        }
        for &o in &self.outputs {
            if o >= self.gates.len() {
                return Err(Error::MalformedCircuit(format!("output {o} out of range")));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Evaluate every output gate to its exact polynomial.
    pub fn eval(&self) -> Result<Vec<Poly>> {
        self.validate()?;
        let values = self.eval_all()?;
        Ok(self.outputs.iter().map(|&o| values[o].clone()).collect())
    }

    /// Evaluate the unique output of a single-output circuit.
    pub fn eval_single(&self) -> Result<Poly> {
        let mut v = self.eval()?;
        if v.len() != 1 {
            return Err(Error::MalformedCircuit(format!(
                "expected single output, got {}",
                v.len()
            )));
        }
        Ok(v.pop().unwrap())
    }

    pub fn eval_all(&self) -> Result<Vec<Poly>> {
        let mut values: Vec<Poly> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                GateKind::Input(f, c) => {
                    let mut p = f.to_poly_n(self.order, self.nvars);
                    if !c.is_zero() {
                        p = p.add(&Poly::constant(self.nvars, c.clone()));
                    }
                    p
                }
                GateKind::Add([a, b], [sa, sb]) => {
                    values[*a].scale(sa).add(&values[*b].scale(sb))
                }
                GateKind::Mul2([a, b], [sa, sb]) => {
                    values[*a].scale(sa).mul(&values[*b].scale(sb))
                }
                GateKind::Mul3([a, b, c], [sa, sb, sc]) => values[*a]
                    .scale(sa)
                    .mul(&values[*b].scale(sb))
                    .mul(&values[*c].scale(sc)),
                GateKind::NegCube(a, s) => values[*a].scale(s).pow(3).neg(),
            };
            values.push(v);
        }
        Ok(values)
    }

    /// Formula predicate: every gate feeds at most one parent edge, and gates
    /// are used by at most one of (parent edge, output slot).
    pub fn is_formula(&self) -> bool {
        let mut uses = vec![0usize; self.gates.len()];
        for g in &self.gates {
            for c in g.children() {
                uses[c] += 1;
            }
        }
        for &o in &self.outputs {
            uses[o] += 1;
        }
        uses.iter().all(|&u| u <= 1)
    }

    /// IHL predicate: every input leaf has zero constant and a nonzero form.
    pub fn is_ihl(&self) -> bool {
        self.gates.iter().all(|g| match g {
            GateKind::Input(f, c) => c.is_zero() && !f.is_zero(),
            _ => true,
        })
    }

    /// Gates restricted to the arity-3 basis {Add, Mul3} plus inputs.
    pub fn is_arity3(&self) -> bool {
        self.gates.iter().all(|g| {
            matches!(
                g,
                GateKind::Input(..) | GateKind::Add(..) | GateKind::Mul3(..)
            )
        })
    }

    /// Per-gate depth (leaves at 0); the circuit depth is the max over
    /// outputs.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            d[i] = g
                .children()
                .iter()
                .map(|&c| d[c] + 1)
                .max()
                .unwrap_or(0);
        }
        d
    }

    pub fn depth(&self) -> usize {
        let d = self.depths();
        self.outputs.iter().map(|&o| d[o]).max().unwrap_or(0)
    }

    /// Multiplication depth: number of multiplication gates on the deepest
    /// leaf-to-output path.
    pub fn mult_depth(&self) -> usize {
        let mut d = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            let own = match g {
                GateKind::Mul2(..) | GateKind::Mul3(..) | GateKind::NegCube(..) => 1,
                _ => 0,
            };
            d[i] = g
                .children()
                .iter()
                .map(|&c| d[c])
                .max()
                .unwrap_or(0)
                + own;
        }
        self.outputs.iter().map(|&o| d[o]).max().unwrap_or(0)
    }

    /// Formal degrees assuming homogeneous gates (degree of Add = max child).
    pub fn formal_degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            d[i] = match g {
                GateKind::Input(..) => 1,
                GateKind::Add([a, b], _) => d[*a].max(d[*b]),
                GateKind::Mul2([a, b], _) => d[*a] + d[*b],
                GateKind::Mul3([a, b, c], _) => d[*a] + d[*b] + d[*c],
                GateKind::NegCube(a, _) => 3 * d[*a],
            };
        }
        d
    }
}

/// Incremental construction of circuits in topological order.
pub struct CircuitBuilder {
    pub nvars: usize,
    pub order: u32,
    gates: Vec<GateKind>,
}

impl CircuitBuilder {
    pub fn new(order: u32, nvars: usize) -> Self {
        CircuitBuilder {
            nvars,
            order,
            gates: Vec::new(),
        }
    }

    fn push(&mut self, g: GateKind) -> GateId {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub(crate) fn push_gate(&mut self, g: GateKind) -> GateId {
        self.push(g)
    }

    pub(crate) fn gate(&self, id: GateId) -> &GateKind {
        &self.gates[id]
    }

    /// Overwrite gate `id` with an alias of `src` (src must precede id).
    pub(crate) fn replace_with_alias(&mut self, id: GateId, src: GateId) {
        assert!(src < id, "alias must reference an earlier gate");
        let one = LaurentScalar::one(self.order);
        let zero = LaurentScalar::zero(self.order);
        self.gates[id] = GateKind::Add([src, src], [one, zero]);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn input(&mut self, f: LinearForm) -> GateId {
        let c = LaurentScalar::zero(self.order);
        self.push(GateKind::Input(f, c))
    }

    pub fn input_affine(&mut self, f: LinearForm, c: LaurentScalar) -> GateId {
        self.push(GateKind::Input(f, c))
    }

    pub fn var(&mut self, i: usize) -> GateId {
        let f = LinearForm::var(self.order, self.nvars, i);
        self.input(f)
    }

    pub fn add(&mut self, a: GateId, b: GateId) -> GateId {
        let one = LaurentScalar::one(self.order);
        self.push(GateKind::Add([a, b], [one.clone(), one]))
    }

    pub fn add_scaled(
        &mut self,
        a: GateId,
        sa: LaurentScalar,
        b: GateId,
        sb: LaurentScalar,
    ) -> GateId {
        self.push(GateKind::Add([a, b], [sa, sb]))
    }

    pub fn mul2(&mut self, a: GateId, b: GateId) -> GateId {
        let one = LaurentScalar::one(self.order);
        self.push(GateKind::Mul2([a, b], [one.clone(), one]))
    }

    pub fn mul3(&mut self, a: GateId, b: GateId, c: GateId) -> GateId {
        let one = LaurentScalar::one(self.order);
        self.push(GateKind::Mul3([a, b, c], [one.clone(), one.clone(), one]))
    }

    pub fn mul3_scaled(
        &mut self,
        children: [GateId; 3],
        scales: [LaurentScalar; 3],
    ) -> GateId {
        self.push(GateKind::Mul3(children, scales))
    }

    pub fn neg_cube(&mut self, a: GateId) -> GateId {
        let one = LaurentScalar::one(self.order);
        self.push(GateKind::NegCube(a, one))
    }

    /// value = s * gates[a], realized as an Add with a zero second edge.
    pub fn scaled(&mut self, a: GateId, s: LaurentScalar) -> GateId {
        let zero = LaurentScalar::zero(self.order);
        self.push(GateKind::Add([a, a], [s, zero]))
    }

    /// Balanced addition tree over the given gates (empty input yields a zero
    /// leaf, which violates IHL; callers avoid empty sums on IHL paths).
    pub fn balanced_sum(&mut self, ids: &[GateId]) -> GateId {
        match ids.len() {
            0 => {
                let f = LinearForm::zero(self.order, self.nvars);
                self.input(f)
            }
            1 => ids[0],
            _ => {
                let mid = ids.len() / 2;
                let l = self.balanced_sum(&ids[..mid]);
                let r = self.balanced_sum(&ids[mid..]);
                self.add(l, r)
            }
        }
    }

    /// Splice a foreign circuit in, remapping its gate ids; returns the image
    /// of its gate ids.
    pub fn splice(&mut self, other: &Circuit) -> Vec<GateId> {
        let mut map = Vec::with_capacity(other.gates.len());
        for g in &other.gates {
            let ng = match g {
                GateKind::Input(f, c) => GateKind::Input(f.clone(), c.clone()),
                GateKind::Add([a, b], s) => GateKind::Add([map[*a], map[*b]], s.clone()),
                GateKind::Mul2([a, b], s) => GateKind::Mul2([map[*a], map[*b]], s.clone()),
                GateKind::Mul3([a, b, c], s) => {
                    GateKind::Mul3([map[*a], map[*b], map[*c]], s.clone())
                }
                GateKind::NegCube(a, s) => GateKind::NegCube(map[*a], s.clone()),
            };
            map.push(self.push(ng));
        }
        map
    }

    pub fn finish(self, outputs: Vec<GateId>) -> Circuit {
        Circuit {
            nvars: self.nvars,
            order: self.order,
            gates: self.gates,
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_basics() {
        let mut b = CircuitBuilder::new(1, 3);
        let x = b.var(0);
        let y = b.var(1);
        let z = b.var(2);
        let s = b.add(x, y);
        let p = b.mul3(x, y, z);
        let c = b.finish(vec![x, s, p]);
        let vals = c.eval().unwrap();
        assert_eq!(vals[0], Poly::var(1, 3, 0));
        assert_eq!(vals[1], Poly::var(1, 3, 0).add(&Poly::var(1, 3, 1)));
        assert_eq!(
            vals[2],
            Poly::var(1, 3, 0)
                .mul(&Poly::var(1, 3, 1))
                .mul(&Poly::var(1, 3, 2))
        );
        assert!(c.is_ihl());
        assert!(!c.is_formula()); // x used twice plus output
    }

    #[test]
    fn predicates_and_depth() {
        let mut b = CircuitBuilder::new(1, 2);
        let x = b.var(0);
        let y = b.var(1);
        let m = b.mul2(x, y);
        let c = b.finish(vec![m]);
        assert!(c.is_formula());
        assert!(c.is_ihl());
        assert_eq!(c.depth(), 1);
        assert_eq!(c.mult_depth(), 1);
        let mut b = CircuitBuilder::new(1, 1);
        let k = b.input_affine(
            LinearForm::zero(1, 1),
            LaurentScalar::from_int(1, 7),
        );
        let c = b.finish(vec![k]);
        assert!(!c.is_ihl());
        assert_eq!(c.eval_single().unwrap(), Poly::constant(1, LaurentScalar::from_int(1, 7)));
    }
}
