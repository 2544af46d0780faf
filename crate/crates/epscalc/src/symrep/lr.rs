use super::Partition;
use crate::error::{Error, Result};

/// Littlewood–Richardson coefficient c^lam_{mu,nu}: the number of LR skew
/// tableaux of shape lam/mu and content nu (semistandard, reverse reading
/// word a lattice word).
pub fn lr_coeff(lam: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    if mu.size() + nu.size() != lam.size() {
        return Err(Error::SizeMismatch(format!(
            "lr: |{mu}| + |{nu}| != |{lam}|"
        )));
    }
    if !lam.contains(mu) {
        return Ok(0);
    }
    Ok(count_lr_fillings(lam, mu, nu))
}

fn count_lr_fillings(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    // Fill the skew cells row by row, left to right. Track:
    //  - remaining content per letter
    //  - lattice property: counts[i] of letter i placed so far in the
    //    reading order (we read right-to-left within rows, top to bottom;
    //    filling left-to-right and checking on placement is equivalent when
    //    done row-wise with the running counts).
    // Cells sorted by (row, col).
    let rows = lam.len();
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in mu.part(r)..lam.part(r) {
            cells.push((r, c));
        }
    }
    // For the lattice word property with the standard right-to-left reading,
    // process cells in reading order: rows top to bottom, right to left.
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let nletters = nu.len();
    let mut remaining: Vec<u32> = nu.parts().to_vec();
    let mut placed_count = vec![0u32; nletters];
    // entries[(r, c)] currently placed, for semistandardness checks
    let mut entry: std::collections::HashMap<(usize, u32), u32> = std::collections::HashMap::new();
    fn rec(
        idx: usize,
        cells: &[(usize, u32)],
        mu: &Partition,
        remaining: &mut [u32],
        placed: &mut [u32],
        entry: &mut std::collections::HashMap<(usize, u32), u32>,
    ) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        let mut total = 0;
        for letter in 0..remaining.len() {
            if remaining[letter] == 0 {
                continue;
            }
            // lattice word: after placing, count(letter) <= count(letter-1)
            if letter > 0 && placed[letter] + 1 > placed[letter - 1] {
                continue;
            }
            let v = letter as u32 + 1;
            // rows weakly increase left to right; cells fill right-to-left,
            // so the constraint is against the right neighbor
            if let Some(&rv) = entry.get(&(r, c + 1)) {
                if v > rv {
                    continue;
                }
            }
            // columns strictly increase top to bottom: above neighbor
            if r > 0 {
                if let Some(&av) = entry.get(&(r - 1, c)) {
                    if av >= v {
                        continue;
                    }
                }
                // cell above inside mu carries no entry (counts as smaller)
            }
            remaining[letter] -= 1;
            placed[letter] += 1;
            entry.insert((r, c), v);
            total += rec(idx + 1, cells, mu, remaining, placed, entry);
            entry.remove(&(r, c));
            placed[letter] -= 1;
            remaining[letter] += 1;
        }
        total
    }
    rec(0, &cells, mu, &mut remaining, &mut placed_count, &mut entry)
}

/// Multi-Littlewood–Richardson coefficient: the multiplicity of S_kappa in
/// S_{mu^1} ⊗ … ⊗ S_{mu^k}, by iterated expansion. Intermediate shapes are
/// restricted to subdiagrams of kappa, which is sound because LR products
/// only add boxes.
pub fn multi_lr_coeff(kappa: &Partition, mus: &[Partition]) -> Result<u64> {
    let total: u32 = mus.iter().map(|m| m.size()).sum();
    if total != kappa.size() {
        return Err(Error::SizeMismatch(format!(
            "multi_lr: sizes sum to {total} != |{kappa}|"
        )));
    }
    let mut current: std::collections::HashMap<Partition, u64> = std::collections::HashMap::new();
    current.insert(Partition::empty(), 1);
    for mu in mus {
        if mu.is_empty() {
            continue;
        }
        let mut next: std::collections::HashMap<Partition, u64> = std::collections::HashMap::new();
        for (nu, mult) in &current {
            let target = nu.size() + mu.size();
            for lam in partitions_between(kappa, target) {
                if !lam.contains(nu) {
                    continue;
                }
                let c = lr_coeff(&lam, nu, mu)?;
                if c > 0 {
                    *next.entry(lam).or_insert(0) += mult * c;
                }
            }
        }
        current = next;
    }
    Ok(current.get(kappa).copied().unwrap_or(0))
}

/// Partitions of `size` contained in `kappa`.
fn partitions_between(kappa: &Partition, size: u32) -> Vec<Partition> {
    fn rec(
        kappa: &Partition,
        row: usize,
        left: u32,
        maxpart: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if left == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        if row >= kappa.len() {
            return;
        }
        let hi = maxpart.min(kappa.part(row)).min(left);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(kappa, row + 1, left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(kappa, 0, size, u32::MAX, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn lr_basics() {
        // c^lam_{lam, empty} = 1
        let lam = p(&[3, 2]);
        assert_eq!(lr_coeff(&lam, &lam, &Partition::empty()).unwrap(), 1);
        // Pieri column rule: c^{(2,1)}_{(1),(1,1)} = 1
        assert_eq!(lr_coeff(&p(&[2, 1]), &p(&[1]), &p(&[1, 1])).unwrap(), 1);
        // s_{(1)} * s_{(1)} = s_{(2)} + s_{(1,1)}
        assert_eq!(lr_coeff(&p(&[2]), &p(&[1]), &p(&[1])).unwrap(), 1);
        assert_eq!(lr_coeff(&p(&[1, 1]), &p(&[1]), &p(&[1])).unwrap(), 1);
        // classic: c^{(4,2,1)}_{(2,1),(2,1,1)} = 0 (sizes 3 + 4 = 7)
        assert_eq!(lr_coeff(&p(&[4, 2, 1]), &p(&[2, 1]), &p(&[2, 1, 1])).unwrap(), 1);
        // c^{(3,2,1)}_{(2,1),(2,1)} = 2 (the standard multiplicity-2 example)
        assert_eq!(lr_coeff(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1])).unwrap(), 2);
    }

    #[test]
    fn lr_vs_pieri_row_rule() {
        // s_mu * s_(k) expands with coefficient 1 exactly on horizontal strips
        let mu = p(&[3, 1]);
        for lam in Partition::all(6) {
            let c = lr_coeff(&lam, &mu, &p(&[2])).unwrap();
            // horizontal strip: mu_i >= lam_{i+1}
            let strip = lam.contains(&mu) && (0..lam.len()).all(|i| mu.part(i) >= lam.part(i + 1));
            assert_eq!(c, strip as u64, "Pieri row rule at {lam}");
        }
    }

    #[test]
    fn multi_lr_examples() {
        // S_(1) ⊗ S_(1) ⊗ S_(1): mult of (2,1) is 2, of (3) is 1, of (1,1,1) is 1
        let mus = vec![p(&[1]), p(&[1]), p(&[1])];
        assert_eq!(multi_lr_coeff(&p(&[2, 1]), &mus).unwrap(), 2);
        assert_eq!(multi_lr_coeff(&p(&[3]), &mus).unwrap(), 1);
        assert_eq!(multi_lr_coeff(&p(&[1, 1, 1]), &mus).unwrap(), 1);
        // single rows into a near-row hook: exactly one semistandard tableau
        // of shape (5d-1, 1) with two row contents (paper's boundFIVE count)
        let d = 3u32;
        let kappa = p(&[5 * d - 1, 1]);
        let mus = vec![Partition::row(9), Partition::row(6)];
        assert_eq!(multi_lr_coeff(&kappa, &mus).unwrap(), 1);
    }
}
