//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::{Int, RatVector, Rational};

/// Reduce `m` in place to reduced row echelon form. Returns the pivot columns
/// in ascending order; the rank is their count.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut pr = 0;
    for pc in 0..cols {
        if pr >= rows {
            break;
        }
        let Some(nz) = (pr..rows).find(|&r| !m.at(r, pc).is_zero()) else {
            continue;
        };
        m.swap_rows(nz, pr);
        let inv = m.at(pr, pc).recip();
        for c in pc..cols {
            let v = m.at(pr, c) * &inv;
            *m.at_mut(pr, c) = v;
        }
        for r in 0..rows {
            if r == pr || m.at(r, pc).is_zero() {
                continue;
            }
            let factor = m.at(r, pc).clone();
            for c in pc..cols {
                let v = m.at(r, c) - &factor * m.at(pr, c);
                *m.at_mut(r, c) = v;
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    pivots
}

/// Rank of a rational matrix, exact.
pub fn rank_rational(m: &RatMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of the kernel {v : M v = 0}. The basis vectors are indexed by the
/// free columns in ascending order: basis vector for free column `fc` has a 1
/// at `fc` and the negated RREF entries at the pivot columns.
pub fn nullspace_rational(m: &RatMatrix) -> Vec<RatVector> {
    let cols = m.cols();
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let mut is_pivot = vec![false; cols];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let mut basis = Vec::new();
    for fc in 0..cols {
        if is_pivot[fc] {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[fc] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -work.at(r, fc).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b` over Q. Free variables are pinned to 0; returns `None`
/// when the system is inconsistent.
pub fn solve_rational_system(a: &RatMatrix, b: &[Rational]) -> Option<RatVector> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let cols = a.cols();
    let mut aug = RatMatrix::zero(a.rows(), cols + 1);
    for r in 0..a.rows() {
        for c in 0..cols {
            *aug.at_mut(r, c) = a.at(r, c).clone();
        }
        *aug.at_mut(r, cols) = b[r].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.at(r, cols).clone();
    }
    Some(x)
}

/// Coefficients expressing `v` in the rational span of `basis`, or `None` if
/// `v` lies outside. An empty basis spans only the zero vector.
pub fn in_rational_span(basis: &[RatVector], v: &RatVector) -> Option<Vec<Rational>> {
    for b in basis {
        assert_eq!(b.len(), v.len(), "dimension mismatch");
    }
    if basis.is_empty() {
        return if v.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let a = RatMatrix::from_columns(basis);
    solve_rational_system(&a, v)
}

/// Division-free integer elimination on the augmented system `[A | b]`.
///
/// When `A x = b` has no rational solution, returns integer multipliers `y`
/// together with `r = y . b != 0`, where `y . A = 0`. Returns `None` when the
/// system is consistent.
pub fn integer_inconsistency_witness(a: &IntMatrix, b: &[Int]) -> Option<(Vec<Int>, Int)> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut rhs: Vec<Int> = b.to_vec();
    // Multiplier rows: tracker[r] expresses current row r over the input rows.
    let mut tracker = IntMatrix::identity(rows);
    let mut pr = 0;
    for pc in 0..cols {
        if pr >= rows {
            break;
        }
        let Some(nz) = (pr..rows).find(|&r| !m.at(r, pc).is_zero()) else {
            continue;
        };
        m.swap_rows(nz, pr);
        tracker.swap_rows(nz, pr);
        rhs.swap(nz, pr);
        let pivot = m.at(pr, pc).clone();
        for r in pr + 1..rows {
            let factor = m.at(r, pc).clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..cols {
                let v = &pivot * m.at(r, c) - &factor * m.at(pr, c);
                *m.at_mut(r, c) = v;
            }
            for c in 0..rows {
                let v = &pivot * tracker.at(r, c) - &factor * tracker.at(pr, c);
                *tracker.at_mut(r, c) = v;
            }
            rhs[r] = &pivot * &rhs[r] - &factor * &rhs[pr];
        }
        pr += 1;
    }
    for r in 0..rows {
        if m.row(r).iter().all(Zero::is_zero) && !rhs[r].is_zero() {
            let y: Vec<Int> = tracker.row(r).to_vec();
            // Normalize the witness by its content.
            let mut g = rhs[r].abs();
            for c in &y {
                g = num_integer::gcd(g, c.abs());
            }
            if g > Int::one() {
                let y = y.iter().map(|c| c / &g).collect();
                return Some((y, &rhs[r] / &g));
            }
            return Some((y, rhs[r].clone()));
        }
    }
    None
}
