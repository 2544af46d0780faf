use super::lr::multi_lr_coeff;
use super::partition::{FrequencyVector, Partition};
use super::plethysm::{pieri_precedes, SymCtx};
use crate::error::{Error, Result};

/// Multiplicity of lambda in the coordinate ring of the orbit of the
/// product-plus-power polynomial, by the branching sum
/// `sum_{delta=0}^{D} sum_{mu |- delta*d, mu ⪯ lambda, len(mu) <= d} a_mu(d, delta)`.
pub fn orbit_mult_p11(ctx: &mut SymCtx, lam: &Partition, d: u32, big_d: u32) -> Result<u64> {
    if lam.size() != d * big_d {
        return Err(Error::ConstraintViolation(format!(
            "orbit_mult_p11: |{lam}| != {d}*{big_d}"
        )));
    }
    if lam.len() > d as usize + 1 {
        return Err(Error::ConstraintViolation(format!(
            "orbit_mult_p11: len({lam}) > d+1"
        )));
    }
    let mut total = 0u64;
    for mu in preceded_subpartitions(lam, d as usize) {
        if mu.size() % d != 0 {
            continue;
        }
        let delta = mu.size() / d;
        if delta > big_d {
            continue;
        }
        total += ctx.plethysm(&mu, d, delta)?;
    }
    Ok(total)
}

/// Partitions mu ⪯ lam (Pieri precedence) with at most max_len parts,
/// enumerated by the interlacing condition lam_i >= mu_i >= lam_{i+1}.
fn preceded_subpartitions(lam: &Partition, max_len: usize) -> Vec<Partition> {
    // mu with more than max_len parts would need mu_{max_len+1} > 0, but the
    // interlacing forces mu_i >= lam_{i+1}; so require lam_{max_len+1} == 0.
    if lam.len() > max_len + 1 {
        return Vec::new();
    }
    let rows = lam.len().min(max_len);
    fn rec(lam: &Partition, i: usize, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == rows {
            out.push(Partition::new(cur.clone()));
            return;
        }
        let lo = lam.part(i + 1);
        let hi = lam.part(i).min(if i == 0 { u32::MAX } else { cur[i - 1] });
        for v in lo..=hi {
            cur.push(v);
            rec(lam, i + 1, rows, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lam, 0, rows, &mut Vec::new(), &mut out);
    // the interlacing above guarantees mu ⪯ lam; keep a debug check
    debug_assert!(out.iter().all(|mu| pieri_precedes(mu, lam)));
    out
}

/// Multiplicity of kappa in the coordinate ring of the GL_m orbit of the
/// power sum `x_1^d + … + x_m^d`:
/// `sum_{rho |-_m D} sum_{mu^1..mu^D} c^kappa_{mu^1..mu^D} prod_i a_{mu^i}(rhohat_i, i*d)`.
pub fn orbit_mult_powersum(
    ctx: &mut SymCtx,
    kappa: &Partition,
    d: u32,
    big_d: u32,
    m: u32,
) -> Result<u64> {
    if kappa.size() != d * big_d {
        return Err(Error::ConstraintViolation(format!(
            "orbit_mult_powersum: |{kappa}| != {d}*{big_d}"
        )));
    }
    let mut total = 0u64;
    for rho in Partition::all_with_max_len(big_d, m as usize) {
        total += powersum_term(ctx, kappa, d, big_d, &rho)?;
    }
    Ok(total)
}

/// One rho-term of the power-sum multiplicity formula.
pub fn powersum_term(
    ctx: &mut SymCtx,
    kappa: &Partition,
    d: u32,
    big_d: u32,
    rho: &Partition,
) -> Result<u64> {
    let freq = FrequencyVector::of(rho);
    // choose mu^i |- d*i*freq_i for each part size i = 1..=D with freq_i > 0
    let active: Vec<(u32, u32)> = (1..=big_d)
        .filter_map(|i| {
            let f = freq.count_of(i);
            (f > 0).then_some((i, f))
        })
        .collect();
    fn rec(
        ctx: &mut SymCtx,
        kappa: &Partition,
        d: u32,
        active: &[(u32, u32)],
        idx: usize,
        chosen: &mut Vec<Partition>,
        weight: u64,
    ) -> Result<u64> {
        if weight == 0 {
            return Ok(0);
        }
        if idx == active.len() {
            let mlr = multi_lr_coeff(kappa, chosen)?;
            return Ok(weight * mlr);
        }
        let (i, f) = active[idx];
        let size = d * i * f;
        let mut total = 0u64;
        for mu in Partition::all(size) {
            if !kappa.contains(&mu) {
                continue;
            }
            let a = ctx.plethysm(&mu, f, i * d)?;
            if a == 0 {
                continue;
            }
            chosen.push(mu);
            total += rec(ctx, kappa, d, active, idx + 1, chosen, weight * a)?;
            chosen.pop();
        }
        Ok(total)
    }
    rec(ctx, kappa, d, &active, 0, &mut Vec::new(), 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub lambda: Partition,
    pub a: u64,
    pub b: u64,
}

/// Scan all lambda |- d*delta with at most d+1 rows, comparing the plethysm
/// coefficient a = a_lambda(delta, d) against the orbit multiplicity
/// b = orbit_mult_p11(lambda, d, delta); emit entries with a > b,
/// lexicographically sorted.
pub fn obstruction_scan(d: u32, delta: u32, threads: usize) -> Result<Vec<ScanEntry>> {
    let lambdas = Partition::all_with_max_len(d * delta, d as usize + 1);
    let work = |chunk: &[Partition]| -> Result<Vec<ScanEntry>> {
        // caches are per-thread; duplicate computation across threads is
        // allowed and yields identical values
        let mut ctx = SymCtx::new();
        let mut out = Vec::new();
        for lam in chunk {
            let a = ctx.plethysm(lam, delta, d)?;
            if a == 0 {
                continue;
            }
            let b = orbit_mult_p11(&mut ctx, lam, d, delta)?;
            debug_assert!(b <= a, "orbit multiplicity exceeds ambient at {lam}");
            if a > b {
                out.push(ScanEntry {
                    lambda: lam.clone(),
                    a,
                    b,
                });
            }
        }
        Ok(out)
    };
    let threads = threads.max(1).min(lambdas.len().max(1));
    let mut entries: Vec<ScanEntry> = if threads <= 1 || lambdas.len() < 8 {
        work(&lambdas)?
    } else {
        let chunk = lambdas.len().div_ceil(threads);
        let results: Vec<Result<Vec<ScanEntry>>> = std::thread::scope(|s| {
            let handles: Vec<_> = lambdas
                .chunks(chunk)
                .map(|c| s.spawn(move || work(c)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut all = Vec::new();
        for r in results {
            all.extend(r?);
        }
        all
    };
    entries.sort_by(|x, y| x.lambda.parts().cmp(y.lambda.parts()));
    Ok(entries)
}

/// The obstruction bound pair for lambda = (5d-1, 1) + ((d+1) x 10d):
/// `upper` is the orbit multiplicity of lambda for the product-plus-power
/// orbit, computed through the column-stripping reduction as the nine-term
/// small-plethysm sum; `lower` is the power-sum orbit multiplicity of
/// kappa = (5d-1, 1).
pub fn reduced_obstruction_check(d: u32) -> Result<(u64, u64)> {
    if d < 3 {
        return Err(Error::ConstraintViolation(format!(
            "reduced_obstruction_check requires d >= 3, got {d}"
        )));
    }
    let mut ctx = SymCtx::new();
    let kappa = Partition::new(vec![5 * d - 1, 1]);
    // mu = nu + (d x 10d) with nu ⪯ kappa, |nu| = delta*d, delta = 0..=5;
    // after stripping, a_{nu+block}(d, delta+10d) = a_nu(d, delta).
    let mut upper = 0u64;
    for delta in 0..=5u32 {
        for nu in Partition::all_with_max_len(delta * d, 2) {
            if !kappa.contains(&nu) || !pieri_precedes(&nu, &kappa) {
                continue;
            }
            upper += ctx.plethysm(&nu, d, delta)?;
        }
    }
    let lower = orbit_mult_powersum(&mut ctx, &kappa, d, 5, d + 1)?;
    Ok((upper, lower))
}
