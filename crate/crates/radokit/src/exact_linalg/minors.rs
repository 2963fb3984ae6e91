//! Exact determinants and maximal minors.

use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::Int;
use crate::error::Error;

/// Exact determinant of a square integer matrix. Cofactor expansion for
/// small orders, fraction-free Bareiss elimination above 4x4.
pub fn determinant(m: &IntMatrix) -> Int {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    if m.rows() <= 4 {
        det_cofactor(m)
    } else {
        det_bareiss(m)
    }
}

fn det_cofactor(m: &IntMatrix) -> Int {
    let n = m.rows();
    match n {
        0 => Int::one(),
        1 => m.at(0, 0).clone(),
        2 => m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0),
        _ => {
            let mut det = Int::zero();
            for c in 0..n {
                if m.at(0, c).is_zero() {
                    continue;
                }
                let mut sub = IntMatrix::zero(n - 1, n - 1);
                for i in 1..n {
                    let mut jj = 0;
                    for j in 0..n {
                        if j == c {
                            continue;
                        }
                        *sub.at_mut(i - 1, jj) = m.at(i, j).clone();
                        jj += 1;
                    }
                }
                let term = m.at(0, c) * det_cofactor(&sub);
                if c % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

fn det_bareiss(m: &IntMatrix) -> Int {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a.at(r, k).is_zero()) else {
                return Int::zero();
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                *a.at_mut(i, j) = v;
            }
            *a.at_mut(i, k) = Int::zero();
        }
        prev = a.at(k, k).clone();
    }
    let det = a.at(n - 1, n - 1).clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// All maximal (rows x rows) minors of a wide matrix, one per choice of
/// column tuple in lexicographically increasing order.
pub fn maximal_minors(m: &IntMatrix) -> Result<Vec<(Vec<usize>, Int)>, Error> {
    let (r, c) = (m.rows(), m.cols());
    if r > c {
        return Err(Error::RowsExceedCols { rows: r, cols: c });
    }
    let mut out = Vec::new();
    for cols in combinations(c, r) {
        let mut sub = IntMatrix::zero(r, r);
        for i in 0..r {
            for (jj, &j) in cols.iter().enumerate() {
                *sub.at_mut(i, jj) = m.at(i, j).clone();
            }
        }
        let det = determinant(&sub);
        out.push((cols, det));
    }
    Ok(out)
}

/// All k-subsets of {0, .., n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
