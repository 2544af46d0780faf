//! Exact linear algebra over the cyclotomic field Q(ζ_N).

use crate::polyring::CycloScalar;

/// Rank of a matrix given row-wise, by Gaussian elimination.
pub fn rank(rows: &[Vec<CycloScalar>], order: u32) -> usize {
    let mut m: Vec<Vec<CycloScalar>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.embed(order).unwrap()).collect())
        .collect();
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in &mut m {
        r.resize(ncols, CycloScalar::zero(order));
    }
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < ncols {
        let pivot = (rank..m.len()).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().unwrap();
        for j in col..ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..ncols {
                    let v = &m[i][j] - &(&factor * &m[rank][j]);
                    m[i][j] = v;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Solve A x = b where A is given column-wise (each column a vector of the
/// same length); returns None when inconsistent or underdetermined columns
/// are dependent. A need not be square; a particular solution is returned
/// only when the columns are linearly independent and b lies in their span.
pub fn solve_columns(
    columns: &[Vec<CycloScalar>],
    b: &[CycloScalar],
    order: u32,
) -> Option<Vec<CycloScalar>> {
    let ncols = columns.len();
    let nrows = b.len();
    // augmented matrix rows
    let mut m: Vec<Vec<CycloScalar>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<CycloScalar> = (0..ncols)
                .map(|c| {
                    columns[c]
                        .get(r)
                        .cloned()
                        .unwrap_or_else(|| CycloScalar::zero(order))
                        .embed(order)
                        .unwrap()
                })
                .collect();
            row.push(b[r].embed(order).unwrap());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else {
            return None; // dependent column
        };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().unwrap();
        for j in col..=ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..=ncols {
                    let v = &m[i][j] - &(&factor * &m[rank][j]);
                    m[i][j] = v;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // consistency: remaining rows must have zero RHS
    for row in m.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    Some(
        (0..ncols)
            .map(|c| m[pivot_of_col[c]][ncols].clone())
            .collect(),
    )
}

/// Inverse of a square matrix given row-wise; None if singular.
pub fn invert(rows: &[Vec<CycloScalar>], order: u32) -> Option<Vec<Vec<CycloScalar>>> {
    let n = rows.len();
    let mut m: Vec<Vec<CycloScalar>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n);
            r.iter().map(|c| c.embed(order).unwrap()).collect()
        })
        .collect();
    let mut inv: Vec<Vec<CycloScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CycloScalar::one(order)
                    } else {
                        CycloScalar::zero(order)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = m[col][col].inverse().unwrap();
        for j in 0..n {
            m[col][j] = &m[col][j] * &pinv;
            inv[col][j] = &inv[col][j] * &pinv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..n {
                    let a = &m[i][j] - &(&factor * &m[col][j]);
                    m[i][j] = a;
                    let b = &inv[i][j] - &(&factor * &inv[col][j]);
                    inv[i][j] = b;
                }
            }
        }
    }
    Some(inv)
}

/// Complete the given independent rows to an invertible n×n matrix using
/// standard basis vectors, deterministically.
pub fn complete_basis(rows: &[Vec<CycloScalar>], n: usize, order: u32) -> Vec<Vec<CycloScalar>> {
    let mut out: Vec<Vec<CycloScalar>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<CycloScalar> = r.iter().map(|c| c.embed(order).unwrap()).collect();
            v.resize(n, CycloScalar::zero(order));
            v
        })
        .collect();
    for i in 0..n {
        if out.len() == n {
            break;
        }
        let mut e = vec![CycloScalar::zero(order); n];
        e[i] = CycloScalar::one(order);
        let mut candidate = out.clone();
        candidate.push(e.clone());
        if rank(&candidate, order) == candidate.len() {
            out.push(e);
        }
    }
    assert_eq!(out.len(), n, "could not complete basis");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat_int;

    fn c(n: i64) -> CycloScalar {
        CycloScalar::from_rational(1, rat_int(n))
    }

    #[test]
    fn rank_and_inverse() {
        let m = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        assert_eq!(rank(&m, 1), 1);
        let m = vec![vec![c(1), c(2)], vec![c(3), c(4)]];
        assert_eq!(rank(&m, 1), 2);
        let inv = invert(&m, 1).unwrap();
        // m * inv = id
        for i in 0..2 {
            for j in 0..2 {
                let mut s = CycloScalar::zero(1);
                for k in 0..2 {
                    s = &s + &(&m[i][k] * &inv[k][j]);
                }
                assert_eq!(s, if i == j { c(1) } else { c(0) });
            }
        }
    }

    #[test]
    fn solving() {
        let cols = vec![vec![c(1), c(0)], vec![c(1), c(1)]];
        let sol = solve_columns(&cols, &[c(3), c(2)], 1).unwrap();
        assert_eq!(sol, vec![c(1), c(2)]);
        // inconsistent
        let cols = vec![vec![c(1), c(2)]];
        assert!(solve_columns(&cols, &[c(1), c(0)], 1).is_none());
    }

    #[test]
    fn completion() {
        let rows = vec![vec![c(1), c(1), c(0)]];
        let full = complete_basis(&rows, 3, 1);
        assert_eq!(rank(&full, 1), 3);
    }
}
