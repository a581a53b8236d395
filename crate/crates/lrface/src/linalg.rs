//! Small dense linear algebra over exact rationals.
//!
//! Matrices are row-major `Vec<Vec<BigRational>>`. Sizes here are tiny
//! (bounded by the rank of a root system or a Schubert basis in one degree),
//! so simple Gauss-Jordan elimination is plenty.

use num::rational::BigRational;
use num::{BigInt, Integer, One, Zero};

pub type Rat = BigRational;
pub type Mat = Vec<Vec<Rat>>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_i64_rows(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn mat_vec(m: &Mat, v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), v.len());
            row.iter().zip(v).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let s = &a[col][j] * &f;
                    a[r][j] = &a[r][j] - s;
                    let s = &inv[col][j] * &f;
                    inv[r][j] = &inv[r][j] - s;
                }
            }
        }
    }
    Some(inv)
}

/// One solution of `a x = b` for a consistent (possibly rectangular) system,
/// with non-pivot coordinates set to zero. `None` if inconsistent.
pub fn solve_any(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Mat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for j in col..=cols {
            m[row][j] = &m[row][j] / &pv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=cols {
                    let s = &m[row][j] * &f;
                    m[r][j] = &m[r][j] - s;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }
    if m.iter().skip(row).any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, c) in pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

pub fn rank(a: &Mat) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut m = a.to_vec();
    let mut r0 = 0;
    for col in 0..cols {
        let Some(p) = (r0..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(r0, p);
        let pv = m[r0][col].clone();
        for j in col..cols {
            m[r0][j] = &m[r0][j] / &pv;
        }
        for r in (r0 + 1)..rows {
            if !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..cols {
                    let s = &m[r0][j] * &f;
                    m[r][j] = &m[r][j] - s;
                }
            }
        }
        r0 += 1;
        if r0 == rows {
            break;
        }
    }
    r0
}

/// Least common multiple of the denominators, always positive.
pub fn denominator_lcm(xs: &[Rat]) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    if l < BigInt::zero() {
        -l
    } else {
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invert_round_trips() {
        let m = from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        let inv = invert(&m).unwrap();
        let n = m.len();
        for i in 0..n {
            let col: Vec<Rat> = (0..n).map(|j| inv[j][i].clone()).collect();
            let e = mat_vec(&m, &col);
            for (j, v) in e.iter().enumerate() {
                assert_eq!(*v, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(invert(&m).is_none());
    }

    #[test]
    fn solve_any_handles_wide_systems() {
        let a = from_i64_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = vec![rat(3), rat(5)];
        let x = solve_any(&a, &b).unwrap();
        let ax = mat_vec(&a, &x);
        assert_eq!(ax, b);
    }

    #[test]
    fn solve_any_detects_inconsistency() {
        let a = from_i64_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(solve_any(&a, &[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let a = from_i64_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]);
        assert_eq!(rank(&a), 2);
    }
}
