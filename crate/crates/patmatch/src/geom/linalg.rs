//! Small exact linear-algebra helpers over rationals: rank, determinant,
//! inverse. Sizes here are tied to the pattern dimension, so everything is
//! tiny; clarity beats asymptotics.

use num_traits::{One, Zero};

use crate::numeric::Rational;

/// Rank of a row-major matrix via exact Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m[0].len();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &m[r][c];
            for j in c..cols {
                let sub = &factor * &m[r][j];
                m[i][j] = &m[i][j] - &sub;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant and inverse of a square matrix by Gauss-Jordan elimination.
/// Returns `None` for singular matrices.
pub fn det_inverse(mat: &[Vec<Rational>]) -> Option<(Rational, Vec<Vec<Rational>>)> {
    let n = mat.len();
    let mut a: Vec<Vec<Rational>> = mat.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut det = Rational::one();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !a[i][c].is_zero())?;
        if pivot != c {
            a.swap(c, pivot);
            inv.swap(c, pivot);
            det = -det;
        }
        det *= &a[c][c];
        let scale = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &scale;
            inv[c][j] = &inv[c][j] / &scale;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..n {
                let s = &factor * &a[c][j];
                a[i][j] = &a[i][j] - &s;
                let s = &factor * &inv[c][j];
                inv[i][j] = &inv[i][j] - &s;
            }
        }
    }
    Some((det, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rational_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
    }

    #[test]
    fn inverse_round_trips() {
        let m = mat(&[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1]]);
        let (det, inv) = det_inverse(&m).unwrap();
        assert_eq!(det, rational_int(1));
        // m * inv = identity
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rational::zero();
                for l in 0..3 {
                    acc += &m[i][l] * &inv[l][j];
                }
                assert_eq!(acc, if i == j { Rational::one() } else { Rational::zero() });
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(det_inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }
}
