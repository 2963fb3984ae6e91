//! Row-style Hermite normal form over Z and lattice membership tests built
//! on it.
//!
//! The normal form here is: echelon shape, positive pivots, entries above
//! each pivot reduced into [0, pivot). Fixing one normal form keeps golden
//! outputs bit-stable.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::{Int, IntVector, Rational};

/// Compute (H, U) with U unimodular, H = U * M, H in row Hermite normal form.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pr = 0;
    for pc in 0..cols {
        if pr >= rows {
            break;
        }
        // Fold every nonzero entry below (pr, pc) into the pivot via the
        // extended gcd; the 2x2 block applied has determinant +1.
        for r in pr + 1..rows {
            if h.at(r, pc).is_zero() {
                continue;
            }
            let a = h.at(pr, pc).clone();
            let b = h.at(r, pc).clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (qa, qb) = (&a / &g, &b / &g);
            combine_rows(&mut h, pr, r, &x, &y, &qa, &qb);
            combine_rows(&mut u, pr, r, &x, &y, &qa, &qb);
        }
        if h.at(pr, pc).is_zero() {
            continue;
        }
        if h.at(pr, pc).is_negative() {
            negate_row(&mut h, pr);
            negate_row(&mut u, pr);
        }
        pivots.push((pr, pc));
        pr += 1;
    }
    // Reduce entries above each pivot into [0, pivot).
    for &(r, c) in &pivots {
        let pivot = h.at(r, c).clone();
        for i in 0..r {
            let q = h.at(i, c).div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for cc in 0..cols {
                let v = h.at(i, cc) - &q * h.at(r, cc);
                *h.at_mut(i, cc) = v;
            }
            for cc in 0..rows {
                let v = u.at(i, cc) - &q * u.at(r, cc);
                *u.at_mut(i, cc) = v;
            }
        }
    }
    (h, u)
}

/// Apply the unimodular block [[x, y], [-qb, qa]] to rows (r1, r2).
fn combine_rows(m: &mut IntMatrix, r1: usize, r2: usize, x: &Int, y: &Int, qa: &Int, qb: &Int) {
    for c in 0..m.cols() {
        let a = m.at(r1, c).clone();
        let b = m.at(r2, c).clone();
        *m.at_mut(r1, c) = x * &a + y * &b;
        *m.at_mut(r2, c) = qa * &b - qb * &a;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.at(r, c).clone();
        *m.at_mut(r, c) = v;
    }
}

/// First nonzero column of row `r` of `h`, if any.
fn row_pivot(h: &IntMatrix, r: usize) -> Option<usize> {
    (0..h.cols()).find(|&c| !h.at(r, c).is_zero())
}

/// Integer coefficients expressing `v` as a Z-combination of the vectors in
/// `basis`, or `None` when no integer combination exists. Decided through the
/// HNF of the matrix whose rows are the basis vectors.
pub fn in_integer_span(basis: &[IntVector], v: &IntVector) -> Option<Vec<Int>> {
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
    let t = IntMatrix::from_rows(basis.to_vec());
    let (h, u) = hermite_normal_form(&t);
    let mut rem = v.clone();
    let mut y = vec![Int::zero(); basis.len()];
    for r in 0..h.rows() {
        let Some(pc) = row_pivot(&h, r) else { break };
        let (q, m) = rem[pc].div_rem(h.at(r, pc));
        if !m.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for c in 0..h.cols() {
                rem[c] -= &q * h.at(r, c);
            }
        }
        y[r] = q;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // c = y . U maps coefficients over H rows back to the input vectors.
    let mut coeffs = vec![Int::zero(); basis.len()];
    for (r, yr) in y.iter().enumerate() {
        if yr.is_zero() {
            continue;
        }
        for c in 0..basis.len() {
            coeffs[c] += yr * u.at(r, c);
        }
    }
    Some(coeffs)
}

/// The minimal positive integer `d` such that `d * v` lies in the integer
/// lattice generated by `basis`, together with integer coefficients for
/// `d * v`. Returns `None` when `v` is outside even the rational span.
pub fn integer_span_denominator(basis: &[IntVector], v: &IntVector) -> Option<(Int, Vec<Int>)> {
    for b in basis {
        assert_eq!(b.len(), v.len(), "dimension mismatch");
    }
    if basis.is_empty() {
        return if v.iter().all(Zero::is_zero) {
            Some((Int::one(), Vec::new()))
        } else {
            None
        };
    }
    let t = IntMatrix::from_rows(basis.to_vec());
    let (h, u) = hermite_normal_form(&t);
    // Greedy rational reduction against the echelon rows of H. The
    // coefficients are unique, so the lcm of their denominators is exactly
    // the minimal multiplier.
    let mut rem: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let mut y = vec![Rational::zero(); basis.len()];
    for r in 0..h.rows() {
        let Some(pc) = row_pivot(&h, r) else { break };
        let q = &rem[pc] / Rational::from_integer(h.at(r, pc).clone());
        if !q.is_zero() {
            for c in 0..h.cols() {
                let sub = &q * Rational::from_integer(h.at(r, c).clone());
                rem[c] -= sub;
            }
        }
        y[r] = q;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut d = Int::one();
    for q in &y {
        d = d.lcm(q.denom());
    }
    let mut coeffs = vec![Int::zero(); basis.len()];
    for (r, yr) in y.iter().enumerate() {
        if yr.is_zero() {
            continue;
        }
        let scaled = yr * Rational::from_integer(d.clone());
        debug_assert!(scaled.is_integer());
        let s = scaled.to_integer();
        for c in 0..basis.len() {
            coeffs[c] += &s * u.at(r, c);
        }
    }
    Some((d, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> IntVector {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn hnf_gcd_column() {
        let m = IntMatrix::from_i64_rows(&[&[2], &[4]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[2], &[0]]));
        assert_eq!(u.mul(&m), h);

        let m = IntMatrix::from_i64_rows(&[&[6], &[4]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[2], &[0]]));
        assert_eq!(u.mul(&m), h);
    }

    #[test]
    fn hnf_identity_fixed_point() {
        let m = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_single_row_is_sign_normalized() {
        // A 1xN matrix only admits U = [+-1]; the pivot is made positive.
        let m = IntMatrix::from_i64_rows(&[&[-6, 4]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[6, -4]]));
        assert_eq!(u.mul(&m), h);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let m = IntMatrix::from_i64_rows(&[&[1, 7], &[0, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[1, 1], &[0, 3]]));
        assert_eq!(u.mul(&m), h);
    }

    #[test]
    fn integer_span_examples() {
        let b = vec![iv(&[2, 0]), iv(&[0, 2])];
        assert_eq!(in_integer_span(&b, &iv(&[2, 2])), Some(iv(&[1, 1])));
        assert_eq!(in_integer_span(&b, &iv(&[1, 0])), None);

        // Columns a_{1,1}, a_{1,2} of the worked example.
        let b = vec![iv(&[1, 1]), iv(&[1, 3])];
        assert_eq!(in_integer_span(&b, &iv(&[5, 5])), Some(iv(&[5, 0])));

        assert_eq!(in_integer_span(&[], &iv(&[0, 0])), Some(vec![]));
        assert_eq!(in_integer_span(&[], &iv(&[1])), None);
    }

    #[test]
    fn integer_span_coefficients_reproduce_target() {
        let b = vec![iv(&[3, 1, 2]), iv(&[0, 2, -1]), iv(&[1, 1, 1])];
        let v = iv(&[4, 4, 2]);
        if let Some(c) = in_integer_span(&b, &v) {
            let mut s = iv(&[0, 0, 0]);
            for (ci, bi) in c.iter().zip(&b) {
                for d in 0..3 {
                    s[d] += ci * &bi[d];
                }
            }
            assert_eq!(s, v);
        }
    }

    #[test]
    fn span_denominator_minimal() {
        // v = (1,0) against the lattice generated by (2,0): minimal d = 2.
        let b = vec![iv(&[2, 0])];
        let (d, coeffs) = integer_span_denominator(&b, &iv(&[1, 0])).unwrap();
        assert_eq!(d, Int::from(2));
        assert_eq!(coeffs, iv(&[1]));

        // Outside the rational span entirely.
        assert_eq!(integer_span_denominator(&b, &iv(&[0, 1])), None);

        // Already inside the lattice: d = 1.
        let (d, coeffs) = integer_span_denominator(&b, &iv(&[-4, 0])).unwrap();
        assert_eq!(d, Int::from(1));
        assert_eq!(coeffs, iv(&[-2]));
    }
}
