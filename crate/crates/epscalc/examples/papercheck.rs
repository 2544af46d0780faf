use epscalc::polyring::*;
use epscalc::waring::*;

fn var(i: usize, n: usize) -> LinearForm { LinearForm::var(1, n, i) }

fn main() {
    // minimal: d=2, same structure
    let d = 2u32; let n = 3;
    let order = 1;
    let e = LaurentScalar::eps_pow(order, 1);
    let x0 = var(0, n);
    let y0 = var(1, n);
    let sc = |num: i64| LaurentScalar::monomial(CycloScalar::from_rational(order, rat(num, d as i64)), -1);
    let dec = WaringDecomposition::new(d,
        vec![x0.add(&y0.scale(&e)), x0.clone()],
        vec![sc(1), sc(-1)]).unwrap();
    println!("limit: {}", dec.limit().unwrap());
    match gad_from_border(&dec) {
        Ok(g) => { for s in &g.summands { println!("class ell={:?} r={} g={}", s.ell, s.r_k, s.g); } println!("expand={}", g.expand()); }
        Err(er) => println!("ERR {er}"),
    }
}
