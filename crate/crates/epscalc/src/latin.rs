//! Latin square enumeration, column signs, Alon–Tarsi differences and
//! evaluation of the fundamental invariant f_T.

use crate::error::{Error, Result};
use crate::polyring::{CycloScalar, LaurentScalar, LinearForm};
use crate::symrep::Partition;

/// An n×n array with entries 1..=n such that each row and each column is a
/// permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    grid: Vec<Vec<u32>>,
}

impl LatinSquare {
    pub fn new(grid: Vec<Vec<u32>>) -> Result<Self> {
        let n = grid.len();
        for row in &grid {
            if row.len() != n {
                return Err(Error::InvalidLatinSquare("grid is not square".into()));
            }
        }
        let is_perm = |vals: Vec<u32>| {
            let mut seen = vec![false; n];
            for v in vals {
                if v < 1 || v as usize > n || seen[v as usize - 1] {
                    return false;
                }
                seen[v as usize - 1] = true;
            }
            true
        };
        for row in &grid {
            if !is_perm(row.clone()) {
                return Err(Error::InvalidLatinSquare("row is not a permutation".into()));
            }
        }
        for c in 0..n {
            if !is_perm(grid.iter().map(|r| r[c]).collect()) {
                return Err(Error::InvalidLatinSquare(
                    "column is not a permutation".into(),
                ));
            }
        }
        Ok(LatinSquare { n, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &[Vec<u32>] {
        &self.grid
    }

    /// Product over columns c of the sign of the permutation row ↦ L[row][c].
    pub fn column_sign(&self) -> i64 {
        let mut sign = 1i64;
        for c in 0..self.n {
            let perm: Vec<u32> = self.grid.iter().map(|r| r[c]).collect();
            sign *= permutation_sign(&perm);
        }
        sign
    }
}

/// Sign of a permutation given as the image list (values 1..=n).
pub fn permutation_sign(perm: &[u32]) -> i64 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut sign = 1i64;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize - 1;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Enumerate all order-n Latin squares in a deterministic row-by-row
/// backtracking order with column masks, invoking `visit` on each.
pub fn enumerate_latin_squares(n: usize, mut visit: impl FnMut(&LatinSquare)) {
    fn rec(
        n: usize,
        grid: &mut Vec<Vec<u32>>,
        col_used: &mut [u64],
        visit: &mut impl FnMut(&LatinSquare),
    ) {
        if grid.len() == n {
            visit(&LatinSquare {
                n,
                grid: grid.clone(),
            });
            return;
        }
        let mut row = vec![0u32; n];
        fill(n, 0, &mut row, 0, col_used, grid, visit);
    }
    fn fill(
        n: usize,
        c: usize,
        row: &mut [u32],
        row_used: u64,
        col_used: &mut [u64],
        grid: &mut Vec<Vec<u32>>,
        visit: &mut impl FnMut(&LatinSquare),
    ) {
        if c == n {
            grid.push(row.to_vec());
            rec(n, grid, col_used, visit);
            grid.pop();
            return;
        }
        for v in 1..=n as u32 {
            let bit = 1u64 << v;
            if row_used & bit != 0 || col_used[c] & bit != 0 {
                continue;
            }
            row[c] = v;
            col_used[c] |= bit;
            fill(n, c + 1, row, row_used | bit, col_used, grid, visit);
            col_used[c] &= !bit;
        }
    }
    let mut grid: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut col_used = vec![0u64; n];
    rec(n, &mut grid, &mut col_used, &mut visit);
}

/// Signed count of all order-n Latin squares by column sign.
pub fn alon_tarsi_difference(n: usize) -> Result<i64> {
    const BOUND: usize = 5;
    if n == 0 || n > BOUND {
        return Err(Error::EnumerationBound { n, bound: BOUND });
    }
    let mut total = 0i64;
    enumerate_latin_squares(n, |sq| total += sq.column_sign());
    Ok(total)
}

/// A tableau: positive integers placed in the boxes of a Young diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    shape: Partition,
    /// entries row by row, entries[r][c]
    entries: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn new(shape: Partition, entries: Vec<Vec<u32>>) -> Result<Self> {
        if entries.len() != shape.len() {
            return Err(Error::ContentMismatch("row count mismatch".into()));
        }
        for (r, row) in entries.iter().enumerate() {
            if row.len() != shape.part(r) as usize {
                return Err(Error::ContentMismatch(format!("row {r} length mismatch")));
            }
        }
        Ok(Tableau { shape, entries })
    }

    /// The rectangular tableau with m rows and d columns whose row i is
    /// filled with the entry i (the unique candidate invariant tableau).
    pub fn rectangle(m: u32, d: u32) -> Self {
        Tableau {
            shape: Partition::block(m, d),
            entries: (1..=m).map(|i| vec![i; d as usize]).collect(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    /// Content vector: content[v-1] = number of boxes holding v.
    pub fn content(&self) -> Vec<u32> {
        let max = self.entries.iter().flatten().copied().max().unwrap_or(0) as usize;
        let mut c = vec![0u32; max];
        for row in &self.entries {
            for &v in row {
                c[v as usize - 1] += 1;
            }
        }
        c
    }
}

/// A tensor point `p = sum_i l_{i,1} ⊗ … ⊗ l_{i,d}` with ε-free forms.
#[derive(Clone, Debug)]
pub struct TensorPoint {
    summands: Vec<Vec<LinearForm>>,
}

impl TensorPoint {
    pub fn new(summands: Vec<Vec<LinearForm>>) -> Result<Self> {
        let d = summands.first().map(|s| s.len()).unwrap_or(0);
        for s in &summands {
            if s.len() != d {
                return Err(Error::ContentMismatch(
                    "tensor summands have unequal order".into(),
                ));
            }
            if !s.iter().all(|f| f.is_eps_free()) {
                return Err(Error::ContentMismatch(
                    "tensor point forms must be eps-free".into(),
                ));
            }
        }
        Ok(TensorPoint { summands })
    }

    pub fn order_d(&self) -> usize {
        self.summands.first().map(|s| s.len()).unwrap_or(0)
    }

    pub fn summands(&self) -> &[Vec<LinearForm>] {
        &self.summands
    }

    /// The symmetrized tensor of `x_1 … x_d + x_{d+1}^d`: the orbit sum over
    /// all d! slot orderings, every summand scaled by 1/d! so that each
    /// block assignment in the placement sum carries total weight one.
    pub fn product_plus_power_point(order: u32, d: u32) -> Self {
        let n = d as usize + 1;
        let inv_fact = {
            let mut f = num::BigInt::from(1);
            for k in 2..=d as i64 {
                f *= num::BigInt::from(k);
            }
            crate::polyring::Rational::new(num::BigInt::from(1), f)
        };
        let scale = LaurentScalar::from_rational(order, inv_fact);
        let mut summands = Vec::new();
        let mut perm: Vec<usize> = (0..d as usize).collect();
        permute_all(&mut perm, &mut |p| {
            let mut forms: Vec<LinearForm> =
                p.iter().map(|&i| LinearForm::var(order, n, i)).collect();
            forms[0] = forms[0].scale(&scale);
            summands.push(forms);
        });
        let mut pw: Vec<LinearForm> = (0..d as usize)
            .map(|_| LinearForm::var(order, n, d as usize))
            .collect();
        pw[0] = pw[0].scale(&scale);
        summands.push(pw);
        TensorPoint { summands }
    }
}

fn permute_all(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn heap(k: usize, items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            heap(k - 1, items, visit);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(items.len(), items, visit);
}

/// Determinant by cofactor expansion of a square matrix given row-wise.
fn det_rows(rows: &[Vec<CycloScalar>], order: u32) -> CycloScalar {
    let k = rows.len();
    if k == 0 {
        return CycloScalar::one(order);
    }
    if k == 1 {
        return rows[0][0].clone();
    }
    let mut acc = CycloScalar::zero(order);
    for j in 0..k {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<CycloScalar>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let sub = det_rows(&minor, order);
        let term = &rows[0][j] * &sub;
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Determinant of the largest top square submatrix of the matrix whose
/// columns are the given coordinate vectors.
fn top_square_det(cols: &[Vec<CycloScalar>], order: u32) -> CycloScalar {
    let k = cols.len();
    let rows: Vec<Vec<CycloScalar>> = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    cols[c]
                        .get(r)
                        .cloned()
                        .unwrap_or_else(|| CycloScalar::zero(order))
                })
                .collect()
        })
        .collect();
    det_rows(&rows, order)
}

/// Exact evaluation of the fundamental invariant
/// `f_T(p) = sum over proper placements of prod_c det_c`.
///
/// A placement assigns to each block (boxes sharing an entry) a summand index
/// of p, constant on the block, and a bijection from the block's boxes to the
/// tensor slots; det_c is the determinant of the top square part of the
/// matrix whose columns are the forms placed in column c of T.
///
/// Placements inducing the same per-box form assignment are grouped with a
/// multiplicity, and branches where any column receives two equal vectors are
/// pruned (their determinants vanish).
pub fn fundamental_invariant_eval(t: &Tableau, p: &TensorPoint) -> Result<LaurentScalar> {
    let d = p.order_d();
    let content = t.content();
    if content.iter().any(|&c| c as usize != d) {
        return Err(Error::ContentMismatch(format!(
            "content {:?} is not n x {d}",
            content
        )));
    }
    let nblocks = content.len();
    let mut blocks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nblocks];
    for (r, row) in t.entries().iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            blocks[v as usize - 1].push((r, c));
        }
    }
    let ncols = t.shape().part(0) as usize;
    let order = p
        .summands
        .iter()
        .flatten()
        .map(|f| f.order())
        .fold(1, num::integer::lcm);
    let ambient = p
        .summands
        .iter()
        .flatten()
        .map(|f| f.nvars())
        .max()
        .unwrap_or(0);

    // Normalize every form to leading coefficient 1, pulling the extracted
    // scalars into the placement weight. Determinants are multilinear in the
    // columns, so this is exact; it also makes proportional vectors equal,
    // which turns the duplicate-vector pruning into proportionality pruning.
    struct NormSummand {
        slots: Vec<Vec<CycloScalar>>,
        scalar: CycloScalar,
    }
    let mut norm_summands: Vec<NormSummand> = Vec::new();
    'summand: for summand in &p.summands {
        let mut scalar = CycloScalar::one(order);
        let mut slots = Vec::with_capacity(summand.len());
        for f in summand {
            let coords: Vec<CycloScalar> = (0..ambient)
                .map(|i| f.coeff(i).embed(order).unwrap().as_cyclo().unwrap())
                .collect();
            let lead = match coords.iter().find(|c| !c.is_zero()) {
                Some(l) => l.clone(),
                // a zero form kills every determinant using this summand
                None => continue 'summand,
            };
            scalar = &scalar * &lead;
            let inv = lead.inverse().unwrap();
            slots.push(coords.iter().map(|c| c * &inv).collect());
        }
        norm_summands.push(NormSummand { slots, scalar });
    }

    struct BlockChoice {
        per_box: Vec<Vec<CycloScalar>>,
        weight: CycloScalar,
    }
    let mut block_choices: Vec<Vec<BlockChoice>> = Vec::with_capacity(nblocks);
    for block in &blocks {
        let nb = block.len();
        let mut acc: std::collections::HashMap<Vec<Vec<CycloScalar>>, CycloScalar> =
            std::collections::HashMap::new();
        for ns in &norm_summands {
            let mut perm: Vec<usize> = (0..nb).collect();
            permute_all(&mut perm, &mut |pm| {
                let assignment: Vec<Vec<CycloScalar>> =
                    pm.iter().map(|&s| ns.slots[s].clone()).collect();
                let e = acc
                    .entry(assignment)
                    .or_insert_with(|| CycloScalar::zero(order));
                *e = &*e + &ns.scalar;
            });
        }
        let mut choices: Vec<BlockChoice> = acc
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(per_box, weight)| BlockChoice { per_box, weight })
            .collect();
        choices.sort_by_key(|c| format!("{:?}", c.per_box));
        block_choices.push(choices);
    }

    fn rec(
        bi: usize,
        blocks: &[Vec<(usize, usize)>],
        choices: &[Vec<BlockChoice>],
        columns: &mut Vec<Vec<Vec<CycloScalar>>>,
        order: u32,
        weight: &CycloScalar,
        total: &mut CycloScalar,
    ) {
        if bi == blocks.len() {
            let mut prod = weight.clone();
            for col in columns.iter() {
                prod = &prod * &top_square_det(col, order);
                if prod.is_zero() {
                    return;
                }
            }
            *total = &*total + &prod;
            return;
        }
        'choice: for ch in &choices[bi] {
            let placed: Vec<(usize, &Vec<CycloScalar>)> = blocks[bi]
                .iter()
                .zip(ch.per_box.iter())
                .map(|(&(_, c), v)| (c, v))
                .collect();
            for (c, v) in &placed {
                if columns[*c].iter().any(|w| w == *v) {
                    continue 'choice;
                }
            }
            for (c, v) in &placed {
                columns[*c].push((*v).clone());
            }
            let w = weight * &ch.weight;
            rec(bi + 1, blocks, choices, columns, order, &w, total);
            for (c, _) in &placed {
                columns[*c].pop();
            }
        }
    }
    let mut columns: Vec<Vec<Vec<CycloScalar>>> = vec![Vec::new(); ncols];
    let mut total = CycloScalar::zero(order);
    rec(
        0,
        &blocks,
        &block_choices,
        &mut columns,
        order,
        &CycloScalar::one(order),
        &mut total,
    );
    Ok(LaurentScalar::from_cyclo(total))
}

/// Evaluate f_T at the symmetrized product-plus-power point and compare with
/// `(d+1) * alon_tarsi_difference(d)`; returns the nonvanishing flag.
pub fn alon_tarsi_fundamental_check(d: u32) -> Result<bool> {
    if d != 2 && d != 4 {
        return Err(Error::EnumerationBound {
            n: d as usize,
            bound: 4,
        });
    }
    let order = 1;
    let t = Tableau::rectangle(d + 1, d);
    let p = TensorPoint::product_plus_power_point(order, d);
    let value = fundamental_invariant_eval(&t, &p)?;
    let at = alon_tarsi_difference(d as usize)?;
    let expect = LaurentScalar::from_int(order, (d as i64 + 1) * at);
    if value != expect {
        return Err(Error::ConstraintViolation(format!(
            "fundamental invariant {value} != (d+1)*AT = {expect}"
        )));
    }
    Ok(!value.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_signs() {
        let sq = LatinSquare::new(vec![vec![1]]).unwrap();
        assert_eq!(sq.column_sign(), 1);
        let sq = LatinSquare::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(sq.column_sign(), -1);
    }

    #[test]
    fn row_swap_sign_behavior() {
        // swapping two rows multiplies each column permutation by a
        // transposition, so the sign changes by (-1)^n; an even row
        // permutation (a 3-cycle) preserves the sign
        let mut count = 0;
        enumerate_latin_squares(3, |sq| {
            count += 1;
            let g = sq.grid().to_vec();
            let swapped =
                LatinSquare::new(vec![g[1].clone(), g[0].clone(), g[2].clone()]).unwrap();
            assert_eq!(swapped.column_sign(), -sq.column_sign());
            let cycled =
                LatinSquare::new(vec![g[1].clone(), g[2].clone(), g[0].clone()]).unwrap();
            assert_eq!(cycled.column_sign(), sq.column_sign());
        });
        assert_eq!(count, 12);
    }

    #[test]
    fn alon_tarsi_values() {
        assert_eq!(alon_tarsi_difference(1).unwrap(), 1);
        assert_eq!(alon_tarsi_difference(2).unwrap(), -2);
        assert_eq!(alon_tarsi_difference(3).unwrap(), 0);
        assert!(alon_tarsi_difference(6).is_err());
    }

    #[test]
    fn latin_square_counts() {
        let mut c4 = 0u64;
        enumerate_latin_squares(4, |_| c4 += 1);
        assert_eq!(c4, 576);
    }

    #[test]
    fn rank_one_point_vanishes() {
        // single l^{⊗d} summand: every determinant has repeated columns
        let t = Tableau::rectangle(3, 2);
        let f = LinearForm::var(1, 3, 0);
        let p = TensorPoint::new(vec![vec![f.clone(), f.clone()]]).unwrap();
        assert!(fundamental_invariant_eval(&t, &p).unwrap().is_zero());
    }

    #[test]
    fn shape_one_coefficient() {
        // T of shape (1), content 1x1, p = x1: the 1x1 determinant picks the
        // first coordinate
        let t = Tableau::new(Partition::new(vec![1]), vec![vec![1]]).unwrap();
        let p = TensorPoint::new(vec![vec![LinearForm::var(1, 2, 0)]]).unwrap();
        assert_eq!(
            fundamental_invariant_eval(&t, &p).unwrap(),
            LaurentScalar::one(1)
        );
    }

    #[test]
    fn d2_fundamental_identity() {
        // 3x2 rectangle at the normalized symmetrized point equals
        // 3 * alon_tarsi_difference(2) = -6
        let t = Tableau::rectangle(3, 2);
        let p = TensorPoint::product_plus_power_point(1, 2);
        let v = fundamental_invariant_eval(&t, &p).unwrap();
        assert_eq!(v, LaurentScalar::from_int(1, -6));
        assert!(alon_tarsi_fundamental_check(2).unwrap());
    }

    #[test]
    fn partitioned_by_row_consistency() {
        // each choice of the block receiving the power summand contributes
        // the same amount: total / (d+1) must equal the single-row count
        let d = 2u32;
        let t = Tableau::rectangle(d + 1, d);
        let p = TensorPoint::product_plus_power_point(1, d);
        let v = fundamental_invariant_eval(&t, &p).unwrap();
        let at = alon_tarsi_difference(d as usize).unwrap();
        assert_eq!(
            v,
            LaurentScalar::from_int(1, (d as i64 + 1) * at)
        );
    }
}
