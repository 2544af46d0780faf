//! Command-line front end: computations read and write canonical JSON files,
//! scans emit tab-separated tables. Exit codes: 0 success, 2 domain errors
//! (error name on stderr), 1 I/O failures.

use anyhow::Context;
use clap::{Parser, Subcommand};
use epscalc::circuit::{
    ben_or_cleve, ben_or_cleve_trace, brent_arity3, c_poly, continuant_compile, ihl_homogenize,
    to_arity3, vsbr_arity3, ContinuantInput,
};
use epscalc::jsonio;
use epscalc::latin::{alon_tarsi_difference, alon_tarsi_fundamental_check};
use epscalc::symrep::{
    obstruction_scan, orbit_mult_p11, orbit_mult_powersum, plethysm_coeff,
    reduced_obstruction_check, Partition, SymCtx,
};
use epscalc::waring::{
    classify_bwr_normal_form, deborder_waring, essential_variables, gad_from_border, kumar_build,
    kumar_invert, rb_deborder, KumarInverse, RbDeborder,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "epscalc",
    about = "Exact epsilon-degeneration calculus toolkit",
    version
)]
struct Cli {
    /// Emit structured JSON on stdout where applicable
    #[arg(long, global = true)]
    json: bool,
    /// Parallelism degree for scans and enumerations
    #[arg(long, global = true, default_value_t = 4)]
    threads: usize,
    /// Output path (defaults to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plethysm coefficient a_mu(outer, inner) = mult of mu in Sym^outer(Sym^inner)
    Plethysm {
        mu: String,
        outer: u32,
        inner: u32,
    },
    /// Multiplicity of lambda in the coordinate ring of the product-plus-power orbit
    OrbitMult { lambda: String, d: u32, dd: u32 },
    /// Multiplicity of kappa in the coordinate ring of the power-sum orbit
    PowersumMult {
        kappa: String,
        d: u32,
        dd: u32,
        m: u32,
    },
    /// Scan all lambda for plethysm-vs-orbit obstructions; prints lambda \t a \t b
    Scan { d: u32, delta: u32 },
    /// The (upper, lower) obstruction pair for the stretched hook family
    ObstructionCheck { d: u32 },
    /// Build a (border) Kumar expression from a Waring decomposition file
    KumarBuild {
        input: PathBuf,
        #[arg(long)]
        border: bool,
    },
    /// Invert a Kumar expression file into a decomposition or product form
    KumarInvert { input: PathBuf, d: u32 },
    /// Generalized additive decomposition of a border decomposition file
    Gad { input: PathBuf },
    /// Exact de-bordering of a border decomposition file
    Deborder { input: PathBuf },
    /// De-border a restricted binomial given two form-list files
    RbDeborder {
        forms: PathBuf,
        restricted: PathBuf,
        k: usize,
    },
    /// Number of essential variables of a polynomial file
    EssentialVars { input: PathBuf },
    /// Classify a GAD file into its small border-rank normal form
    ClassifyGad { input: PathBuf },
    /// Input homogenization of a circuit file
    Ihl { input: PathBuf },
    /// Convert a homogeneous IHL formula file to the arity-3 basis
    Arity3 { input: PathBuf },
    /// Brent depth reduction for an arity-3 IHL formula file
    Brent { input: PathBuf },
    /// VSBR depth reduction for an arity-3 IHL circuit file
    Vsbr { input: PathBuf, d: usize },
    /// Ben-Or–Cleve program for an IHL formula file at entry (i,j)
    Boc {
        input: PathBuf,
        #[arg(default_value_t = 0)]
        i: usize,
        #[arg(default_value_t = 1)]
        j: usize,
    },
    /// Trace-style Ben-Or–Cleve program (entry (0,0) readout, alpha = eps^-2)
    BocTrace { input: PathBuf },
    /// Compile an odd-degree arity-3 IHL formula file into continuant form
    ContinuantCompile { input: PathBuf },
    /// The parity-alternating elementary symmetric polynomial C_{n,d}
    Cpoly { n: usize, d: usize },
    /// Signed count of order-n Latin squares by column sign
    AlonTarsi { n: usize },
    /// Fundamental invariant identity check at the product-plus-power point
    FundInv { d: u32 },
    /// Re-check a relation bundle file, reporting pass/fail per item
    Verify { bundle: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            if let Some(domain) = e.downcast_ref::<epscalc::Error>() {
                eprintln!("{domain}");
                std::process::exit(2);
            }
            eprintln!("{e:#}");
            std::process::exit(1);
        }
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(cli: &Cli, text: String) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_value(cli: &Cli, v: Value) -> anyhow::Result<()> {
    emit(cli, serde_json::to_string_pretty(&v)?)
}

fn parse_partition(s: &str) -> anyhow::Result<Partition> {
    Ok(Partition::from_str(s)?)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Plethysm { mu, outer, inner } => {
            let mu = parse_partition(mu)?;
            let a = plethysm_coeff(&mu, *outer, *inner)?;
            if cli.json {
                emit_value(cli, json!({"mu": mu.to_string(), "a": a}))
            } else {
                emit(cli, a.to_string())
            }
        }
        Command::OrbitMult { lambda, d, dd } => {
            let lam = parse_partition(lambda)?;
            let mut ctx = SymCtx::new();
            let b = orbit_mult_p11(&mut ctx, &lam, *d, *dd)?;
            if cli.json {
                emit_value(cli, json!({"lambda": lam.to_string(), "b": b}))
            } else {
                emit(cli, b.to_string())
            }
        }
        Command::PowersumMult { kappa, d, dd, m } => {
            let kap = parse_partition(kappa)?;
            let mut ctx = SymCtx::new();
            let b = orbit_mult_powersum(&mut ctx, &kap, *d, *dd, *m)?;
            if cli.json {
                emit_value(cli, json!({"kappa": kap.to_string(), "mult": b}))
            } else {
                emit(cli, b.to_string())
            }
        }
        Command::Scan { d, delta } => {
            let entries = obstruction_scan(*d, *delta, cli.threads)?;
            if cli.json {
                let rows: Vec<Value> = entries
                    .iter()
                    .map(|e| json!({"lambda": format_padded(&e.lambda, *d), "a": e.a, "b": e.b}))
                    .collect();
                emit_value(cli, Value::Array(rows))
            } else {
                let mut out = String::new();
                for e in &entries {
                    out.push_str(&format!(
                        "{}\t{}\t{}\n",
                        format_padded(&e.lambda, *d),
                        e.a,
                        e.b
                    ));
                }
                emit(cli, out.trim_end().to_string())
            }
        }
        Command::ObstructionCheck { d } => {
            let (upper, lower) = reduced_obstruction_check(*d)?;
            if cli.json {
                emit_value(cli, json!({"upper": upper, "lower": lower}))
            } else {
                emit(cli, format!("{upper}\t{lower}"))
            }
        }
        Command::KumarBuild { input, border } => {
            let dec = jsonio::waring_from_json(&read_json(input)?)?;
            let e = kumar_build(&dec, *border)?;
            emit_value(cli, jsonio::kumar_to_json(&e))
        }
        Command::KumarInvert { input, d } => {
            let e = jsonio::kumar_from_json(&read_json(input)?)?;
            match kumar_invert(&e, *d)? {
                KumarInverse::Waring(w) => emit_value(
                    cli,
                    json!({"kind": "waring", "decomposition": jsonio::waring_to_json(&w)}),
                ),
                KumarInverse::Product(p) => emit_value(
                    cli,
                    json!({
                        "kind": "product",
                        "scale": jsonio::scalar_to_json(&p.scale),
                        "forms": p.forms.iter().map(jsonio::form_to_json).collect::<Vec<_>>(),
                    }),
                ),
            }
        }
        Command::Gad { input } => {
            let dec = jsonio::waring_from_json(&read_json(input)?)?;
            let gad = gad_from_border(&dec)?;
            emit_value(cli, jsonio::gad_to_json(&gad))
        }
        Command::Deborder { input } => {
            let dec = jsonio::waring_from_json(&read_json(input)?)?;
            let out = deborder_waring(&dec)?;
            emit_value(cli, jsonio::waring_to_json(&out))
        }
        Command::RbDeborder {
            forms,
            restricted,
            k,
        } => {
            let lf = forms_from_file(forms)?;
            let lfr = forms_from_file(restricted)?;
            match rb_deborder(&lf, &lfr, *k)? {
                RbDeborder::ExactRb {
                    factors,
                    restricted_factors,
                } => emit_value(
                    cli,
                    json!({
                        "kind": "exact",
                        "factors": factors
                            .map(|fs| fs.iter().map(jsonio::form_to_json).collect::<Vec<_>>()),
                        "restricted": restricted_factors
                            .map(|fs| fs.iter().map(jsonio::form_to_json).collect::<Vec<_>>()),
                    }),
                ),
                RbDeborder::Border(dec) => emit_value(
                    cli,
                    json!({"kind": "border", "decomposition": jsonio::sls_to_json(&dec)}),
                ),
            }
        }
        Command::EssentialVars { input } => {
            let p = jsonio::poly_from_json(&read_json(input)?)?;
            let n = essential_variables(&p)?;
            emit(cli, n.to_string())
        }
        Command::ClassifyGad { input } => {
            let gad = jsonio::gad_from_json(&read_json(input)?)?;
            let label = classify_bwr_normal_form(&gad)?;
            emit(cli, label.to_string())
        }
        Command::Ihl { input } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let out = ihl_homogenize(&c)?;
            emit_value(cli, jsonio::circuit_to_json(&out))
        }
        Command::Arity3 { input } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let out = to_arity3(&c)?;
            emit_value(cli, jsonio::circuit_to_json(&out))
        }
        Command::Brent { input } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let out = brent_arity3(&c)?;
            emit_value(cli, jsonio::circuit_to_json(&out))
        }
        Command::Vsbr { input, d } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let out = vsbr_arity3(&c, *d)?;
            emit_value(cli, jsonio::circuit_to_json(&out))
        }
        Command::Boc { input, i, j } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let prog = ben_or_cleve(&c, (*i, *j))?;
            emit_value(cli, jsonio::program_to_json(&prog))
        }
        Command::BocTrace { input } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let prog = ben_or_cleve_trace(&c)?;
            emit_value(cli, jsonio::program_to_json(&prog))
        }
        Command::ContinuantCompile { input } => {
            let c = jsonio::circuit_from_json(&read_json(input)?)?;
            let prog = continuant_compile(&ContinuantInput::Odd(c))?;
            emit_value(
                cli,
                json!({
                    "d": prog.d,
                    "r": prog.r(),
                    "forms": prog.forms.iter().map(jsonio::form_to_json).collect::<Vec<_>>(),
                }),
            )
        }
        Command::Cpoly { n, d } => {
            let p = c_poly(*n, *d);
            emit_value(cli, jsonio::poly_to_json(&p))
        }
        Command::AlonTarsi { n } => {
            let v = alon_tarsi_difference(*n)?;
            emit(cli, v.to_string())
        }
        Command::FundInv { d } => {
            let nonzero = alon_tarsi_fundamental_check(*d)?;
            emit(cli, format!("{}", if nonzero { 1 } else { 0 }))
        }
        Command::Verify { bundle } => {
            let v = read_json(bundle)?;
            let report = verify_bundle(&v)?;
            let any_fail = report.iter().any(|r| r["pass"] == json!(false));
            emit_value(cli, Value::Array(report))?;
            if any_fail {
                std::process::exit(2);
            }
            Ok(())
        }
    }
}

/// Partition with trailing zeros padded to d+1 parts, matching the table
/// convention.
fn format_padded(lam: &Partition, d: u32) -> String {
    let mut parts: Vec<u32> = lam.parts().to_vec();
    parts.resize(d as usize + 1, 0);
    let body = parts
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("({body})")
}

fn forms_from_file(path: &Path) -> anyhow::Result<Vec<epscalc::polyring::LinearForm>> {
    let v = read_json(path)?;
    let arr = v
        .as_array()
        .ok_or_else(|| epscalc::Error::Json("expected an array of forms".into()))?;
    Ok(arr
        .iter()
        .map(jsonio::form_from_json)
        .collect::<Result<Vec<_>, _>>()?)
}

/// Relation bundle: {"items": [{"relation": name, …}, …]} or a single item.
fn verify_bundle(v: &Value) -> anyhow::Result<Vec<Value>> {
    let items: Vec<&Value> = match v.get("items").and_then(Value::as_array) {
        Some(arr) => arr.iter().collect(),
        None => vec![v],
    };
    let mut out = Vec::new();
    for (idx, item) in items.into_iter().enumerate() {
        let relation = item
            .get("relation")
            .and_then(Value::as_str)
            .ok_or_else(|| epscalc::Error::Json("item needs a relation".into()))?;
        let result = check_relation(relation, item);
        let row = match result {
            Ok(None) => json!({"item": idx, "relation": relation, "pass": true}),
            Ok(Some(residual)) => json!({
                "item": idx,
                "relation": relation,
                "pass": false,
                "residual": residual,
            }),
            Err(e) => json!({
                "item": idx,
                "relation": relation,
                "pass": false,
                "error": e.to_string(),
            }),
        };
        out.push(row);
    }
    Ok(out)
}

/// Ok(None) = pass; Ok(Some(residual)) = fail with the residual term.
fn check_relation(relation: &str, item: &Value) -> anyhow::Result<Option<String>> {
    let field = |name: &str| -> anyhow::Result<&Value> {
        item.get(name)
            .ok_or_else(|| epscalc::Error::Json(format!("item needs {name}")).into())
    };
    match relation {
        "eval-equality" => {
            let c = jsonio::circuit_from_json(field("circuit")?)?;
            let claimed = jsonio::poly_from_json(field("value")?)?;
            let got = c.eval_single()?;
            let diff = got.sub(&claimed);
            Ok((!diff.is_zero()).then(|| diff.to_string()))
        }
        "equiv-mod-eps" => {
            let a = jsonio::poly_from_json(field("left")?)?;
            let b = jsonio::poly_from_json(field("right")?)?;
            if a.equiv_mod_eps(&b) {
                Ok(None)
            } else {
                Ok(Some(format!("limits differ: {a} vs {b}")))
            }
        }
        "matrix-identity" | "boc" => {
            let prog = jsonio::program_from_json(field("program")?)?;
            let f = jsonio::poly_from_json(field("value")?)?;
            let got = prog.value();
            let diff = got.sub(&f);
            Ok((!diff.is_zero()).then(|| diff.to_string()))
        }
        "limit-equal" => {
            let e = jsonio::kumar_from_json(field("kumar")?)?;
            let w = jsonio::waring_from_json(field("decomposition")?)?;
            let le = e.expand().limit()?;
            let lw = w.limit()?;
            let diff = le.sub(&lw);
            Ok((!diff.is_zero()).then(|| diff.to_string()))
        }
        other => Err(epscalc::Error::UnknownRelation(other.to_string()).into()),
    }
}
