//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --release --test acceptance -- --nocapture`.

use epscalc::circuit::{
    ben_or_cleve, brent_arity3, brent_depth_bound, check_product_degree_ratio, continuant_compile,
    vsbr_arity3, vsbr_mult_depth_bound, Circuit, CircuitBuilder, ContinuantInput,
    ProgramPosition,
};
use epscalc::latin::{alon_tarsi_difference, fundamental_invariant_eval, Tableau, TensorPoint};
use epscalc::polyring::{rat, CycloScalar, LaurentScalar, LinearForm, Poly};
use epscalc::symrep::{obstruction_scan, reduced_obstruction_check, Partition, SymCtx};
use epscalc::waring::{
    deborder_bound, deborder_waring, elementary_symmetric, gad_from_border, kumar_build,
    kumar_invert, newton_identity_check, KumarInverse, WaringDecomposition,
};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(criterion: u32, what: &str) {
    println!("[criterion {criterion}] PASS: {what}");
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec())
}

#[test]
fn criterion_01_appendix_tables_d3() {
    // scan 3 8 must contain exactly the two listed entries; every smaller
    // delta is empty. Exact integers, zero tolerance.
    for delta in 1..=7u32 {
        let entries = obstruction_scan(3, delta, 4).unwrap();
        assert!(
            entries.is_empty(),
            "scan 3 {delta} should be empty, got {entries:?}"
        );
    }
    let entries = obstruction_scan(3, 8, 4).unwrap();
    let got: Vec<(Partition, u64, u64)> = entries
        .iter()
        .map(|e| (e.lambda.clone(), e.a, e.b))
        .collect();
    assert_eq!(
        got,
        vec![
            (p(&[8, 8, 4, 4]), 2, 1),
            (p(&[10, 6, 4, 4]), 4, 3),
        ]
    );
    pass(1, "scan 3 8 = {(8,8,4,4): 2>1, (10,6,4,4): 4>3}; delta <= 7 empty");
}

#[test]
fn criterion_02_appendix_tables_d4() {
    let entries = obstruction_scan(4, 6, 4).unwrap();
    let got: Vec<(Partition, u64, u64)> = entries
        .iter()
        .map(|e| (e.lambda.clone(), e.a, e.b))
        .collect();
    assert_eq!(
        got,
        vec![
            (p(&[6, 6, 4, 4, 4]), 1, 0),
            (p(&[7, 7, 5, 5]), 1, 0),
            (p(&[7, 7, 7, 3]), 1, 0),
            (p(&[8, 5, 5, 3, 3]), 1, 0),
        ]
    );
    pass(2, "scan 4 6 = the four listed partitions with a=1, b=0");
}

#[test]
fn criterion_03_plethysm_spot_values() {
    let mut ctx = SymCtx::new();
    assert_eq!(ctx.plethysm(&p(&[5, 5, 5, 3, 3]), 7, 3).unwrap(), 1);
    for n in 1..=5u32 {
        for m in 1..=5u32 {
            assert_eq!(
                ctx.plethysm(&Partition::row(n * m), n, m).unwrap(),
                1,
                "a_(nm)(n,m) at n={n}, m={m}"
            );
            if n * m >= 2 {
                let hook = p(&[n * m - 1, 1]);
                assert_eq!(
                    ctx.plethysm(&hook, n, m).unwrap(),
                    0,
                    "hook at n={n}, m={m}"
                );
            }
        }
    }
    pass(3, "a_(5,5,5,3,3)(7,3)=1; a_(nm)(n,m)=1 and hook=0 for n,m <= 5");
}

#[test]
fn criterion_04_obstruction_theorem() {
    for d in [3u32, 4, 5] {
        assert_eq!(
            reduced_obstruction_check(d).unwrap(),
            (4, 5),
            "obstruction pair at d={d}"
        );
    }
    pass(4, "reduced obstruction check = (4, 5) for d in {3, 4, 5}");
}

/// Random ε-free linear form with small integer coordinates, nonzero.
fn random_form(rng: &mut ChaCha8Rng, order: u32, nvars: usize) -> LinearForm {
    loop {
        let coeffs: Vec<LaurentScalar> = (0..nvars)
            .map(|_| LaurentScalar::from_int(order, rng.gen_range(-2..=2)))
            .collect();
        let f = LinearForm::new(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

#[test]
fn criterion_05_border_newton_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let d = rng.gen_range(2..=5u32);
        let r = rng.gen_range(1..=4usize);
        let nvars = rng.gen_range(1..=4usize);
        let order = 2 * d;
        // scales sigma^d so that the d-th root absorption always succeeds
        let mut forms = Vec::with_capacity(r);
        let mut scales = Vec::with_capacity(r);
        for _ in 0..r {
            forms.push(random_form(&mut rng, order, nvars));
            let base = match rng.gen_range(0..4) {
                0 => LaurentScalar::from_int(order, 1),
                1 => LaurentScalar::from_int(order, -1),
                2 => LaurentScalar::from_rational(order, rat(1, 2)),
                _ => LaurentScalar::from_cyclo(
                    CycloScalar::primitive_root(order, d).unwrap(),
                ),
            };
            let mut s = LaurentScalar::one(order);
            for _ in 0..d {
                s = &s * &base;
            }
            scales.push(s);
        }
        let dec = WaringDecomposition::new(d, forms, scales).unwrap();
        let f = dec.expand();
        if f.is_zero() {
            continue;
        }
        let e = kumar_build(&dec, true).unwrap();
        assert!(e.m() <= (d as usize) * r, "m = dr");
        match kumar_invert(&e, d).unwrap() {
            KumarInverse::Waring(w) => {
                assert!(w.len() <= (d as usize) * r, "summand bound");
                assert_eq!(
                    w.limit().unwrap(),
                    f.embed(w.order()).unwrap(),
                    "roundtrip limit"
                );
            }
            other => panic!("expected border decomposition, got {other:?}"),
        }
        done += 1;
    }
    pass(5, "100 randomized kumar build/invert roundtrips, <= d*r summands");
}

fn paper_example_21(d: u32) -> WaringDecomposition {
    // (1/(d eps)) [(x0+eps y0)^d - x0^d + (x1+eps y1)^d - x1^d
    //              + 2 (x0+x1+eps y2)^d - 2 (x0+x1)^d]
    let n = 5;
    let order = 1;
    let e = LaurentScalar::eps_pow(order, 1);
    let var = |i: usize| LinearForm::var(order, n, i);
    let x0 = var(0);
    let x1 = var(1);
    let x01 = x0.add(&x1);
    let sc =
        |num: i64| LaurentScalar::monomial(CycloScalar::from_rational(order, rat(num, d as i64)), -1);
    WaringDecomposition::new(
        d,
        vec![
            x0.add(&var(2).scale(&e)),
            x0.clone(),
            x1.add(&var(3).scale(&e)),
            x1.clone(),
            x01.add(&var(4).scale(&e)),
            x01.clone(),
        ],
        vec![sc(1), sc(-1), sc(1), sc(-1), sc(2), sc(-2)],
    )
    .unwrap()
}

#[test]
fn criterion_06_gad_paper_examples() {
    // d = 5: exactly the three summands x0^4 y0, x1^4 y1, 2 (x0+x1)^4 y2
    let dec = paper_example_21(5);
    let gad = gad_from_border(&dec).unwrap();
    assert_eq!(gad.summands.len(), 3);
    assert_eq!(gad.expand(), dec.limit().unwrap());
    let n = 5;
    let var = |i: usize| LinearForm::var(1, n, i);
    let expected = [
        (var(0), Poly::var(1, n, 2)),
        (var(1), Poly::var(1, n, 3)),
        (
            var(0).add(&var(1)),
            Poly::var(1, n, 4).scale_rat(&rat(2, 1)),
        ),
    ];
    for (ell, g) in &expected {
        let s = gad
            .summands
            .iter()
            .find(|s| s.ell == *ell)
            .unwrap_or_else(|| panic!("missing summand {ell:?}"));
        assert_eq!(&s.g, g);
        assert_eq!(s.r_k, 2);
    }
    // the wild-form input: d = 3, r = 5 raises DegreeTooLow
    let wild = {
        let n = 5;
        let order = 1;
        let e = LaurentScalar::eps_pow(order, 1);
        let var = |i: usize| LinearForm::var(order, n, i);
        let x0 = var(0);
        let x1 = var(1);
        let sc = |num: i64| {
            LaurentScalar::monomial(CycloScalar::from_rational(order, rat(num, 9)), -1)
        };
        WaringDecomposition::new(
            3,
            vec![
                x0.add(&var(2).scale(&e)),
                x1.add(&var(3).scale(&e)),
                x0.add(&x1).add(&var(4).scale(&e)),
                x0.add(&x1.scale(&LaurentScalar::from_int(order, 2))),
                x0.scale(&LaurentScalar::from_int(order, 2)).add(&x1),
            ],
            vec![sc(3), sc(3), sc(6), sc(-1), sc(-1)],
        )
        .unwrap()
    };
    match gad_from_border(&wild) {
        Err(epscalc::Error::DegreeTooLow { d: 3, r: 5 }) => {}
        other => panic!("expected DegreeTooLow, got {other:?}"),
    }
    pass(6, "gad on the d=5 example gives the three exact summands; wild form rejected");
}

/// Random border decomposition built from local finite-difference groups
/// with pairwise distinct bases; r <= 4 and d >= r - 1.
fn random_border_dec(rng: &mut ChaCha8Rng) -> WaringDecomposition {
    let order = 1;
    let nvars = 4;
    loop {
        let r_total = rng.gen_range(2..=4usize);
        // partition r_total into group sizes 1 or 2
        let mut groups = Vec::new();
        let mut left = r_total;
        while left > 0 {
            let g = if left >= 2 && rng.gen_bool(0.6) { 2 } else { 1 };
            groups.push(g);
            left -= g;
        }
        let d = rng.gen_range((r_total as u32).saturating_sub(1).max(2)..=5);
        let mut bases: Vec<LinearForm> = Vec::new();
        let mut forms = Vec::new();
        let mut scales = Vec::new();
        let mut ok = true;
        for g in &groups {
            // a fresh base not proportional to earlier ones
            let mut base = None;
            for _ in 0..20 {
                let cand = random_form(rng, order, nvars);
                if bases
                    .iter()
                    .all(|b| !epscalc::polyring::proportional(b, &cand))
                {
                    base = Some(cand);
                    break;
                }
            }
            let Some(base) = base else {
                ok = false;
                break;
            };
            bases.push(base.clone());
            match g {
                1 => {
                    forms.push(base);
                    scales.push(LaurentScalar::from_int(order, rng.gen_range(1..=3)));
                }
                _ => {
                    // (1/(d eps))[(base + eps m)^d - base^d]
                    let m = random_form(rng, order, nvars);
                    let e = LaurentScalar::eps_pow(order, 1);
                    let sc = LaurentScalar::monomial(
                        CycloScalar::from_rational(order, rat(1, d as i64)),
                        -1,
                    );
                    forms.push(base.add(&m.scale(&e)));
                    forms.push(base);
                    scales.push(sc.clone());
                    scales.push(-&sc);
                }
            }
        }
        if !ok {
            continue;
        }
        let dec = WaringDecomposition::new(d, forms, scales).unwrap();
        if dec.limit().map(|l| l.is_zero()).unwrap_or(true) {
            continue;
        }
        return dec;
    }
}

#[test]
fn criterion_07_deborder_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..50 {
        let dec = random_border_dec(&mut rng);
        let r = dec.len() as u32;
        let out = deborder_waring(&dec).unwrap();
        assert!(!out.is_border(), "case {case}: output must be exact");
        assert_eq!(
            out.expand(),
            dec.limit().unwrap().embed(out.order()).unwrap(),
            "case {case}: expansion equality"
        );
        assert!(
            BigInt::from(out.len() as i64) <= deborder_bound(dec.d, r),
            "case {case}: bound d*C(2r-2, r-1)"
        );
    }
    pass(7, "50 randomized de-borderings: exact expansion, d*C(2r-2,r-1) bound");
}

/// Random IHL arity-2 formula of depth <= max_depth, at least one gate.
fn random_ihl_formula(rng: &mut ChaCha8Rng, nvars: usize, max_depth: usize) -> Circuit {
    let order = 1;
    let mut b = CircuitBuilder::new(order, nvars);
    fn rec(
        rng: &mut ChaCha8Rng,
        b: &mut CircuitBuilder,
        nvars: usize,
        depth: usize,
    ) -> usize {
        if depth == 0 || rng.gen_bool(0.3) {
            let f = loop {
                let coeffs: Vec<LaurentScalar> = (0..nvars)
                    .map(|_| LaurentScalar::from_int(1, rng.gen_range(-2..=2)))
                    .collect();
                let f = LinearForm::new(coeffs);
                if !f.is_zero() {
                    break f;
                }
            };
            return b.input(f);
        }
        let x = rec(rng, b, nvars, depth - 1);
        let y = rec(rng, b, nvars, depth - 1);
        if rng.gen_bool(0.5) {
            b.add(x, y)
        } else {
            b.mul2(x, y)
        }
    }
    let out = rec(rng, &mut b, nvars, max_depth);
    b.finish(vec![out])
}

#[test]
fn criterion_08_ben_or_cleve_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..100 {
        let depth = rng.gen_range(1..=4usize);
        let c = random_ihl_formula(&mut rng, 3, depth);
        let f = c.eval_single().unwrap();
        let prog = ben_or_cleve(&c, (0, 1)).unwrap();
        assert!(
            prog.factors.len() <= 4usize.pow(c.depth() as u32),
            "case {case}: factor count {} > 4^{}",
            prog.factors.len(),
            c.depth()
        );
        // the product expansion equals id + f E_{0,1} exactly
        let m = prog.product_minus_id();
        for (i, row) in m.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if (i, j) == (0, 1) {
                    assert_eq!(entry, &f, "case {case}: entry (0,1)");
                } else {
                    assert!(entry.is_zero(), "case {case}: entry ({i},{j}) nonzero");
                }
            }
        }
        assert_eq!(prog.position, ProgramPosition::Entry(0, 1));
    }
    pass(8, "100 random IHL formulas: exact 3x3 product identity, count <= 4^depth");
}

/// Random homogeneous arity-3 IHL formula of the given odd degree with a
/// small gate budget.
fn random_arity3_formula(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    degree: usize,
    budget: usize,
) -> Circuit {
    let order = 1;
    let mut b = CircuitBuilder::new(order, nvars);
    fn leaf(rng: &mut ChaCha8Rng, b: &mut CircuitBuilder, nvars: usize) -> usize {
        let f = loop {
            let coeffs: Vec<LaurentScalar> = (0..nvars)
                .map(|_| LaurentScalar::from_int(1, rng.gen_range(-1..=2)))
                .collect();
            let f = LinearForm::new(coeffs);
            if !f.is_zero() {
                break f;
            }
        };
        b.input(f)
    }
    fn rec(
        rng: &mut ChaCha8Rng,
        b: &mut CircuitBuilder,
        nvars: usize,
        degree: usize,
        budget: &mut usize,
    ) -> usize {
        if degree == 1 {
            if *budget > 1 && rng.gen_bool(0.25) {
                *budget -= 1;
                let x = rec(rng, b, nvars, 1, budget);
                let y = rec(rng, b, nvars, 1, budget);
                return b.add(x, y);
            }
            return leaf(rng, b, nvars);
        }
        if *budget > 1 && rng.gen_bool(0.3) {
            *budget -= 1;
            let x = rec(rng, b, nvars, degree, budget);
            let y = rec(rng, b, nvars, degree, budget);
            return b.add(x, y);
        }
        *budget = budget.saturating_sub(1);
        // split degree into three odd parts
        let d1 = 1 + 2 * rng.gen_range(0..=(degree - 3) / 2);
        let rem = degree - d1;
        let d2 = 1 + 2 * rng.gen_range(0..=(rem - 2) / 2);
        let d3 = rem - d2;
        let x = rec(rng, b, nvars, d1, budget);
        let y = rec(rng, b, nvars, d2, budget);
        let z = rec(rng, b, nvars, d3, budget);
        b.mul3(x, y, z)
    }
    let mut budget = budget;
    let out = rec(rng, &mut b, nvars, degree, &mut budget);
    b.finish(vec![out])
}

#[test]
fn criterion_09_continuant_compilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    // 30 odd-degree cases at degrees 3 and 5
    let mut done = 0;
    while done < 30 {
        let degree = if done % 2 == 0 { 3 } else { 5 };
        let c = random_arity3_formula(&mut rng, 3, degree, 8);
        let f = c.eval_single().unwrap();
        if f.is_zero() {
            continue;
        }
        let prog = continuant_compile(&ContinuantInput::Odd(c)).unwrap();
        let val = prog.evaluate().unwrap();
        assert!(
            val.equiv_mod_eps(&f),
            "odd case {done}: C_{{r,{degree}}} limit mismatch"
        );
        done += 1;
    }
    // 10 even-degree cases at d = 2 and 4: f = (1/d) sum_i x_i h_i
    let mut done = 0;
    while done < 10 {
        let d: u32 = if done % 2 == 0 { 2 } else { 4 };
        let nv = 3;
        let mut partials = Vec::new();
        let mut f = Poly::zero(1, nv);
        for i in 0..nv {
            let h = random_arity3_formula(&mut rng, nv, d as usize - 1, 4);
            let hv = h.eval_single().unwrap();
            f = f.add(&Poly::var(1, nv, i).mul(&hv).scale_rat(&rat(1, d as i64)));
            partials.push((i, h));
        }
        if f.is_zero() {
            continue;
        }
        let prog = continuant_compile(&ContinuantInput::Even {
            partials,
            degree: d,
        })
        .unwrap();
        let val = prog.evaluate().unwrap();
        assert!(val.equiv_mod_eps(&f), "even case {done} at d={d}");
        done += 1;
    }
    pass(9, "30 odd + 10 even continuant compilations: equiv_mod_eps(C_(r,d)(l), f)");
}

#[test]
fn criterion_10_depth_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    // 50 Brent instances
    for case in 0..50 {
        let degree = [3usize, 5, 7][case % 3];
        let c = random_arity3_formula(&mut rng, 3, degree, 14);
        let r = brent_arity3(&c).unwrap();
        assert_eq!(
            r.eval_single().unwrap(),
            c.eval_single().unwrap(),
            "brent case {case}"
        );
        assert!(
            r.depth() <= brent_depth_bound(c.size()),
            "brent depth bound at case {case}: {} > {} (size {})",
            r.depth(),
            brent_depth_bound(c.size()),
            c.size()
        );
    }
    // 50 VSBR instances
    for case in 0..50 {
        let degree = [3usize, 5, 7, 9][case % 4];
        let c = random_arity3_formula(&mut rng, 3, degree, 10);
        let r = vsbr_arity3(&c, degree).unwrap();
        assert_eq!(r.eval().unwrap(), c.eval().unwrap(), "vsbr case {case}");
        assert!(
            r.mult_depth() <= vsbr_mult_depth_bound(degree),
            "vsbr mult depth at case {case}: {} > {}",
            r.mult_depth(),
            vsbr_mult_depth_bound(degree)
        );
        assert!(
            check_product_degree_ratio(&r),
            "vsbr child degree ratio at case {case}"
        );
    }
    pass(10, "100 depth reductions: eval preserved, recorded depth bounds met");
}

#[test]
fn criterion_11_alon_tarsi_fundamental() {
    assert_eq!(alon_tarsi_difference(3).unwrap(), 0);
    assert_eq!(alon_tarsi_difference(5).unwrap(), 0);
    for d in [2u32, 4] {
        let t = Tableau::rectangle(d + 1, d);
        let point = TensorPoint::product_plus_power_point(1, d);
        let v = fundamental_invariant_eval(&t, &point).unwrap();
        let at = alon_tarsi_difference(d as usize).unwrap();
        assert_eq!(
            v,
            LaurentScalar::from_int(1, (d as i64 + 1) * at),
            "fundamental invariant at d={d}"
        );
        assert!(!v.is_zero());
    }
    pass(11, "AT(3)=AT(5)=0; f_T = (d+1)*AT(d) for d=2 (576 squares at d=4)");
}

#[test]
fn criterion_12_newton_and_kc_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let order = 6;
    // randomized Newton identity over Q(zeta_6)[eps^{±1}]
    let random_eps_form = |rng: &mut ChaCha8Rng, nvars: usize| -> LinearForm {
        loop {
            let coeffs: Vec<LaurentScalar> = (0..nvars)
                .map(|_| {
                    let mut s = LaurentScalar::zero(order);
                    for _ in 0..2 {
                        let e = rng.gen_range(-1..=1);
                        let zp = rng.gen_range(0..6);
                        let q = rng.gen_range(-2..=2i64);
                        if q != 0 {
                            s = &s + &LaurentScalar::monomial(
                                CycloScalar::zeta_pow(order, zp).scale(&rat(q, 1)),
                                e,
                            );
                        }
                    }
                    s
                })
                .collect();
            let f = LinearForm::new(coeffs);
            if !f.is_zero() {
                break f;
            }
        }
    };
    for case in 0..15 {
        let m = rng.gen_range(2..=4usize);
        let forms: Vec<LinearForm> = (0..m).map(|_| random_eps_form(&mut rng, 3)).collect();
        for k in 1..=m {
            assert!(
                newton_identity_check(&forms, k),
                "newton identity case {case} at k={k}"
            );
        }
    }
    // kc-not-universal filter: families with e_j = 0 for j < d satisfy
    // e_d = (-1)^(d-1) l_d^d, preserved under scaling and substitution
    for case in 0..15 {
        let d = rng.gen_range(2..=4u32);
        let ord = num::integer::lcm(order, d);
        let zeta = CycloScalar::primitive_root(ord, d).unwrap();
        let base = {
            let coeffs: Vec<LaurentScalar> = (0..3)
                .map(|_| {
                    LaurentScalar::monomial(
                        CycloScalar::from_rational(ord, rat(rng.gen_range(-2..=2), 1)),
                        rng.gen_range(0..=1),
                    )
                })
                .collect();
            let f = LinearForm::new(coeffs);
            if f.is_zero() {
                LinearForm::var(ord, 3, 0)
            } else {
                f
            }
        };
        let scale = LaurentScalar::monomial(
            CycloScalar::from_rational(ord, rat(rng.gen_range(1..=3), 1)),
            rng.gen_range(-1..=1),
        );
        let forms: Vec<LinearForm> = (1..=d)
            .map(|j| {
                base.scale(&LaurentScalar::from_cyclo(zeta.pow(j)))
                    .neg()
                    .scale(&scale)
            })
            .collect();
        for j in 1..d as usize {
            assert!(
                elementary_symmetric(&forms, j).is_zero(),
                "e_{j} must vanish at case {case}"
            );
        }
        let ed = elementary_symmetric(&forms, d as usize);
        let last = forms.last().unwrap();
        let mut expect = last.to_poly().pow(d);
        if d % 2 == 0 {
            expect = expect.neg();
        }
        assert_eq!(ed, expect, "kc filter at case {case}");
    }
    pass(12, "Newton identities and the kc filter hold over Q(zeta_6)[eps]");
}
