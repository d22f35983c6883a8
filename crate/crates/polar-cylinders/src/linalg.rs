//! Small exact linear-algebra helpers: rational rank/solve, integer kernels,
//! integer determinants. Everything here is dense; the matrices involved are
//! tiny (rank at most eleven).

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::rational::Rational;

/// Rank over Q of a list of row vectors.
pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let width = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    let mut col = 0;
    while col < width && rank < m.len() {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        if let Some(p) = pivot {
            m.swap(rank, p);
            let inv = m[rank][col].clone();
            for r in rank + 1..m.len() {
                if !m[r][col].is_zero() {
                    let factor = &m[r][col] / &inv;
                    for c in col..width {
                        let sub = &factor * &m[rank][c];
                        m[r][c] = &m[r][c] - &sub;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Solves `columns * x = target` exactly. Returns `None` when the target is
/// outside the column span.
pub(crate) fn solve_columns(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let height = target.len();
    let width = columns.len();
    // Augmented matrix [columns | target].
    let mut m: Vec<Vec<Rational>> = (0..height)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..width {
        if row >= height {
            break;
        }
        let pivot = (row..height).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..=width {
            m[row][c] = &m[row][c] / &inv;
        }
        for r in 0..height {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=width {
                    let sub = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    // Inconsistent rows mean the target is not in the span.
    for r in row..height {
        if !m[r][width].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); width];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[r][width].clone();
    }
    Some(x)
}

/// Z-basis of the integer kernel `{ v : rows * v = 0 }`, computed by
/// unimodular column operations (column-style Hermite reduction).
pub(crate) fn integer_kernel(rows: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    for row in &m {
        debug_assert_eq!(row.len(), width);
    }
    // u holds the column operations: columns of the identity to start.
    let mut u: Vec<Vec<BigInt>> = (0..width)
        .map(|c| {
            (0..width)
                .map(|r| if r == c { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut used = vec![false; width];

    for r in 0..m.len() {
        loop {
            // Pick the free column with the smallest nonzero magnitude in row r.
            let mut best: Option<usize> = None;
            for c in 0..width {
                if used[c] || m[r][c].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(c),
                    Some(b) if m[r][c].abs() < m[r][b].abs() => Some(c),
                    keep => keep,
                };
            }
            let Some(pivot) = best else { break };
            let mut others = false;
            for c in 0..width {
                if c == pivot || used[c] || m[r][c].is_zero() {
                    continue;
                }
                others = true;
                let q = &m[r][c] / &m[r][pivot]; // truncated division keeps entries integral
                if !q.is_zero() {
                    for row in m.iter_mut() {
                        let sub = &q * &row[pivot];
                        row[c] = &row[c] - &sub;
                    }
                    for row in u.iter_mut() {
                        let sub = &q * &row[pivot];
                        row[c] = &row[c] - &sub;
                    }
                }
            }
            if !others {
                used[pivot] = true;
                break;
            }
        }
    }

    let mut kernel = Vec::new();
    for c in 0..width {
        if used[c] {
            continue;
        }
        if m.iter().all(|row| row[c].is_zero()) {
            let mut v: Vec<BigInt> = u.iter().map(|row| row[c].clone()).collect();
            // Normalize orientation: first nonzero entry positive.
            if let Some(first) = v.iter().find(|e| !e.is_zero()) {
                if first.is_negative() {
                    for e in v.iter_mut() {
                        *e = -e.clone();
                    }
                }
            }
            kernel.push(v);
        }
    }
    kernel
}

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
pub(crate) fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut prev = BigInt::from(1);
    let mut sign = 1i32;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn rank_simple() {
        let rows = vec![
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1), rat(2, 1)],
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank(&rows[..2]), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solve_in_span() {
        let cols = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]];
        let x = solve_columns(&cols, &[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(2, 1)]);
        assert!(solve_columns(&cols[..1], &[rat(0, 1), rat(1, 1)]).is_none());
    }

    #[test]
    fn kernel_of_projection() {
        // Kernel of (0 0 -1) is spanned by e0, e1.
        let k = integer_kernel(&bi(&[&[0, 0, -1]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(v[2].is_zero());
        }
    }

    #[test]
    fn kernel_mixed() {
        // x + y + z = 0, x - z = 0  =>  kernel spanned by (1, -2, 1).
        let k = integer_kernel(&bi(&[&[1, 1, 1], &[1, 0, -1]]), 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(&v[0], &v[2]);
        assert_eq!(v[1], -(&v[0] * &BigInt::from(2)));
        assert_eq!(v[0].abs(), BigInt::from(1));
    }

    #[test]
    fn determinant() {
        assert_eq!(integer_determinant(&bi(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(integer_determinant(&bi(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            integer_determinant(&bi(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])),
            BigInt::from(-1)
        );
    }
}
