//! Dense matrices over a local coefficient ring.
//!
//! Elimination only ever divides by units. Over a local ring a square matrix
//! is invertible exactly when it is invertible modulo the maximal ideal, so a
//! column without a unit entry means the matrix is singular there.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nilring::{Ring, RingElem};

pub type Matrix = Vec<Vec<RingElem>>;

pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| RingElem::zero(ring)).collect()).collect()
}

pub fn identity(ring: &Ring, n: usize) -> Matrix {
    let mut m = zeros(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RingElem::one(ring);
    }
    m
}

pub fn mat_mul(ring: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(ring, a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    x.mul_acc_into(y, &mut out[i][j]);
                }
            }
        }
    }
    out
}

pub fn is_identity(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// Row-reduce `[a | rhs]` so `a` becomes the identity; returns the reduced `rhs`.
fn reduce(mut a: Matrix, mut rhs: Matrix) -> Result<Matrix> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || rhs.len() != n {
        return Err(Error::Internal("elimination needs a square system".into()));
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col].is_unit()).ok_or(Error::NotUnit)?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = a[col][col].invert()?;
        for x in a[col].iter_mut().chain(rhs[col].iter_mut()) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let (prow, prhs) = (a[col].clone(), rhs[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = -&a[r][col];
            for (x, p) in a[r].iter_mut().zip(&prow).chain(rhs[r].iter_mut().zip(&prhs)) {
                if !p.is_zero() {
                    factor.mul_acc_into(p, x);
                }
            }
        }
    }
    Ok(rhs)
}

pub fn inverse(ring: &Ring, a: &Matrix) -> Result<Matrix> {
    reduce(a.clone(), identity(ring, a.len()))
}

/// Solve `a x = b`.
pub fn solve(a: &Matrix, b: &[RingElem]) -> Result<Vec<RingElem>> {
    let rhs = b.iter().map(|x| alloc::vec![x.clone()]).collect();
    Ok(reduce(a.clone(), rhs)?.into_iter().map(|mut r| r.remove(0)).collect())
}

/// Solve `a x = b` for a matrix of right-hand sides.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    reduce(a.clone(), b.clone())
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant by elimination with unit pivots.
pub fn determinant(ring: &Ring, a: &Matrix) -> Result<RingElem> {
    let n = a.len();
    let mut a = a.clone();
    let mut det = RingElem::one(ring);
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col].is_unit()).ok_or(Error::NotUnit)?;
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].invert()?;
        let prow = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = -&(&row[col] * &inv);
            for (x, p) in row.iter_mut().zip(&prow).skip(col) {
                if !p.is_zero() {
                    factor.mul_acc_into(p, x);
                }
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilring::RingSpec;
    use alloc::vec;

    #[test]
    fn inverse_and_determinant_over_dual_numbers() {
        let r = RingSpec::new(vec!["e".into()], vec![2], None).unwrap();
        let e = RingElem::generator(&r, "e").unwrap();
        let one = RingElem::one(&r);
        let two = RingElem::from_int(&r, 2);
        // [[1+e, e], [2, 1]] has det 1 + e - 2e = 1 - e
        let m = vec![vec![&one + &e, e.clone()], vec![two, one.clone()]];
        assert_eq!(determinant(&r, &m).unwrap(), &one - &e);
        let inv = inverse(&r, &m).unwrap();
        assert!(is_identity(&mat_mul(&r, &m, &inv)));
        let x = solve(&m, &[one.clone(), RingElem::zero(&r)]).unwrap();
        assert_eq!(x, vec![inv[0][0].clone(), inv[1][0].clone()]);
    }

    #[test]
    fn nilpotent_column_is_rejected() {
        let r = RingSpec::new(vec!["e".into()], vec![2], None).unwrap();
        let e = RingElem::generator(&r, "e").unwrap();
        let m = vec![vec![e.clone(), RingElem::one(&r)], vec![e.clone(), RingElem::one(&r)]];
        assert_eq!(determinant(&r, &m), Err(Error::NotUnit));
    }
}
