//! Canonical JSON encodings. Scalars serialize as
//! `{"N": order, "terms": [[epsExp, ["num/den", …]], …]}` with terms sorted
//! by ε-exponent; polynomials as `{"nvars": n, "terms": [[[exps…], scalar],
//! …]}` sorted by exponent vector. Round-trips are bit-exact.

use crate::circuit::{Circuit, GateKind, MatrixProgram, ProgramPosition};
use crate::error::{Error, Result};
use crate::polyring::{CycloScalar, LaurentScalar, LinearForm, Monomial, Poly, Rational};
use crate::waring::{
    Gad, GadSummand, KumarExpr, SigmaLambdaSigma, SlsSummand, WaringDecomposition,
};
use num::BigInt;
use serde_json::{json, Value};
use std::str::FromStr;

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let s = v.as_str().ok_or_else(|| bad("rational must be a string"))?;
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(n).map_err(|e| bad(format!("bad numerator: {e}")))?;
    let den = BigInt::from_str(d).map_err(|e| bad(format!("bad denominator: {e}")))?;
    if den == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn scalar_to_json(s: &LaurentScalar) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(k, c)| {
            json!([
                k,
                c.coords().iter().map(rational_to_json).collect::<Vec<_>>()
            ])
        })
        .collect();
    json!({"N": s.order(), "terms": terms})
}

pub fn scalar_from_json(v: &Value) -> Result<LaurentScalar> {
    let order = v
        .get("N")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("scalar needs integer N"))? as u32;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("scalar needs terms array"))?;
    let mut out = Vec::new();
    for t in terms {
        let pair = t.as_array().ok_or_else(|| bad("term must be a pair"))?;
        if pair.len() != 2 {
            return Err(bad("term must be [exp, coords]"));
        }
        let k = pair[0]
            .as_i64()
            .ok_or_else(|| bad("eps exponent must be an integer"))?;
        let coords = pair[1]
            .as_array()
            .ok_or_else(|| bad("coords must be an array"))?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?;
        out.push((k, CycloScalar::from_coords(order, coords)?));
    }
    Ok(LaurentScalar::from_terms(order, out))
}

pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!([m.exponents(), scalar_to_json(c)]))
        .collect();
    json!({"nvars": p.nvars(), "terms": terms})
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let nvars = v
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("poly needs nvars"))? as usize;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("poly needs terms"))?;
    let mut order = 1u32;
    let mut parsed = Vec::new();
    for t in terms {
        let pair = t.as_array().ok_or_else(|| bad("poly term must be a pair"))?;
        if pair.len() != 2 {
            return Err(bad("poly term must be [exps, scalar]"));
        }
        let exps: Vec<u32> = pair[0]
            .as_array()
            .ok_or_else(|| bad("exponents must be an array"))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| bad("bad exp")))
            .collect::<Result<_>>()?;
        let c = scalar_from_json(&pair[1])?;
        order = num::integer::lcm(order, c.order());
        parsed.push((Monomial::new(exps), c));
    }
    let mut p = Poly::zero(order, nvars);
    for (m, c) in parsed {
        p.add_term(m, &c);
    }
    Ok(p)
}

pub fn form_to_json(f: &LinearForm) -> Value {
    Value::Array(f.coeffs().iter().map(scalar_to_json).collect())
}

pub fn form_from_json(v: &Value) -> Result<LinearForm> {
    let coeffs = v
        .as_array()
        .ok_or_else(|| bad("linear form must be an array"))?
        .iter()
        .map(scalar_from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearForm::new(coeffs))
}

pub fn waring_to_json(w: &WaringDecomposition) -> Value {
    json!({
        "d": w.d,
        "forms": w.forms.iter().map(form_to_json).collect::<Vec<_>>(),
        "scales": w.scales.iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

pub fn waring_from_json(v: &Value) -> Result<WaringDecomposition> {
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("decomposition needs d"))? as u32;
    let forms = v
        .get("forms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs forms"))?
        .iter()
        .map(form_from_json)
        .collect::<Result<Vec<_>>>()?;
    let scales = v
        .get("scales")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs scales"))?
        .iter()
        .map(scalar_from_json)
        .collect::<Result<Vec<_>>>()?;
    WaringDecomposition::new(d, forms, scales)
}

pub fn kumar_to_json(k: &KumarExpr) -> Value {
    json!({
        "alpha": scalar_to_json(&k.alpha),
        "forms": k.forms.iter().map(form_to_json).collect::<Vec<_>>(),
    })
}

pub fn kumar_from_json(v: &Value) -> Result<KumarExpr> {
    let alpha = scalar_from_json(v.get("alpha").ok_or_else(|| bad("needs alpha"))?)?;
    let forms = v
        .get("forms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs forms"))?
        .iter()
        .map(form_from_json)
        .collect::<Result<Vec<_>>>()?;
    KumarExpr::new(alpha, forms)
}

pub fn gad_to_json(g: &Gad) -> Value {
    json!({
        "d": g.d,
        "summands": g
            .summands
            .iter()
            .map(|s| json!({
                "ell": form_to_json(&s.ell),
                "g": poly_to_json(&s.g),
                "r_k": s.r_k,
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn gad_from_json(v: &Value) -> Result<Gad> {
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("gad needs d"))? as u32;
    let summands = v
        .get("summands")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("gad needs summands"))?
        .iter()
        .map(|s| {
            Ok(GadSummand {
                ell: form_from_json(s.get("ell").ok_or_else(|| bad("summand needs ell"))?)?,
                g: poly_from_json(s.get("g").ok_or_else(|| bad("summand needs g"))?)?,
                r_k: s
                    .get("r_k")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("summand needs r_k"))? as u32,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Gad { d, summands })
}

pub fn sls_to_json(s: &SigmaLambdaSigma) -> Value {
    json!({
        "s_bound": s.s_bound,
        "e_bound": s.e_bound,
        "summands": s
            .summands
            .iter()
            .map(|t| json!({
                "scale": scalar_to_json(&t.scale),
                "const": scalar_to_json(&t.affine_const),
                "form": form_to_json(&t.form),
                "exp": t.exponent,
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn sls_from_json(v: &Value) -> Result<SigmaLambdaSigma> {
    let s_bound = v
        .get("s_bound")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("needs s_bound"))? as usize;
    let e_bound = v
        .get("e_bound")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("needs e_bound"))? as u32;
    let summands = v
        .get("summands")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs summands"))?
        .iter()
        .map(|t| {
            Ok(SlsSummand {
                scale: scalar_from_json(t.get("scale").ok_or_else(|| bad("needs scale"))?)?,
                affine_const: scalar_from_json(
                    t.get("const").ok_or_else(|| bad("needs const"))?,
                )?,
                form: form_from_json(t.get("form").ok_or_else(|| bad("needs form"))?)?,
                exponent: t
                    .get("exp")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("needs exp"))? as u32,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SigmaLambdaSigma::new(summands, s_bound, e_bound)
}

pub fn circuit_to_json(c: &Circuit) -> Value {
    let gates: Vec<Value> = c
        .gates
        .iter()
        .map(|g| match g {
            GateKind::Input(f, k) => json!({
                "kind": "input",
                "form": form_to_json(f),
                "const": scalar_to_json(k),
            }),
            GateKind::Add(ch, sc) => json!({
                "kind": "add",
                "children": ch,
                "scales": sc.iter().map(scalar_to_json).collect::<Vec<_>>(),
            }),
            GateKind::Mul2(ch, sc) => json!({
                "kind": "mul2",
                "children": ch,
                "scales": sc.iter().map(scalar_to_json).collect::<Vec<_>>(),
            }),
            GateKind::Mul3(ch, sc) => json!({
                "kind": "mul3",
                "children": ch,
                "scales": sc.iter().map(scalar_to_json).collect::<Vec<_>>(),
            }),
            GateKind::NegCube(ch, sc) => json!({
                "kind": "negcube",
                "children": [ch],
                "scales": [scalar_to_json(sc)],
            }),
        })
        .collect();
    json!({
        "nvars": c.nvars,
        "order": c.order,
        "gates": gates,
        "outputs": c.outputs,
    })
}

pub fn circuit_from_json(v: &Value) -> Result<Circuit> {
    let nvars = v
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("circuit needs nvars"))? as usize;
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("circuit needs order"))? as u32;
    let gates_json = v
        .get("gates")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("circuit needs gates"))?;
    let outputs = v
        .get("outputs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("circuit needs outputs"))?
        .iter()
        .map(|o| {
            o.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| bad("bad output"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gates = Vec::with_capacity(gates_json.len());
    for g in gates_json {
        let kind = g
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("gate needs kind"))?;
        let children = || -> Result<Vec<usize>> {
            g.get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("gate needs children"))?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| bad("bad child"))
                })
                .collect()
        };
        let scales = || -> Result<Vec<LaurentScalar>> {
            g.get("scales")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("gate needs scales"))?
                .iter()
                .map(scalar_from_json)
                .collect()
        };
        let gate = match kind {
            "input" => GateKind::Input(
                form_from_json(g.get("form").ok_or_else(|| bad("input needs form"))?)?,
                scalar_from_json(g.get("const").ok_or_else(|| bad("input needs const"))?)?,
            ),
            "add" | "mul2" | "mul3" | "negcube" => {
                let ch = children()?;
                let sc = scales()?;
                match (kind, ch.as_slice(), sc.as_slice()) {
                    ("add", [a, b], [s1, s2]) => GateKind::Add([*a, *b], [s1.clone(), s2.clone()]),
                    ("mul2", [a, b], [s1, s2]) => {
                        GateKind::Mul2([*a, *b], [s1.clone(), s2.clone()])
                    }
                    ("mul3", [a, b, c], [s1, s2, s3]) => {
                        GateKind::Mul3([*a, *b, *c], [s1.clone(), s2.clone(), s3.clone()])
                    }
                    ("negcube", [a], [s]) => GateKind::NegCube(*a, s.clone()),
                    _ => return Err(bad(format!("bad arity for {kind}"))),
                }
            }
            other => return Err(bad(format!("unknown gate kind {other}"))),
        };
        gates.push(gate);
    }
    let c = Circuit {
        nvars,
        order,
        gates,
        outputs,
    };
    c.validate()?;
    Ok(c)
}

pub fn program_to_json(p: &MatrixProgram) -> Value {
    let factors: Vec<Value> = p
        .factors
        .iter()
        .map(|m| {
            Value::Array(
                m.iter()
                    .map(|row| Value::Array(row.iter().map(form_to_json).collect()))
                    .collect(),
            )
        })
        .collect();
    let position = match p.position {
        ProgramPosition::Entry(i, j) => json!({"entry": [i, j]}),
        ProgramPosition::Trace => json!("trace"),
    };
    json!({
        "dim": p.dim,
        "alpha": scalar_to_json(&p.alpha),
        "position": position,
        "factors": factors,
    })
}

pub fn program_from_json(v: &Value) -> Result<MatrixProgram> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("program needs dim"))? as usize;
    let alpha = scalar_from_json(v.get("alpha").ok_or_else(|| bad("program needs alpha"))?)?;
    let position = match v.get("position") {
        Some(Value::String(s)) if s == "trace" => ProgramPosition::Trace,
        Some(obj) => {
            let e = obj
                .get("entry")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("position needs entry"))?;
            if e.len() != 2 {
                return Err(bad("entry must be [i, j]"));
            }
            ProgramPosition::Entry(
                e[0].as_u64().ok_or_else(|| bad("bad entry"))? as usize,
                e[1].as_u64().ok_or_else(|| bad("bad entry"))? as usize,
            )
        }
        None => return Err(bad("program needs position")),
    };
    let factors = v
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("program needs factors"))?
        .iter()
        .map(|m| {
            m.as_array()
                .ok_or_else(|| bad("factor must be a matrix"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("factor row must be an array"))?
                        .iter()
                        .map(form_from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixProgram {
        dim,
        factors,
        alpha,
        position,
    })
}
