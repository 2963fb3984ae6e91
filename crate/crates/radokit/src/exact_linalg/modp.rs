//! Gaussian elimination over F_p.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::primes::is_prime;
use super::Int;
use crate::error::Error;

fn reduce(x: &Int, p: &Int) -> Int {
    let r = x.mod_floor(p);
    debug_assert!(!r.is_negative());
    r
}

use num_traits::Signed;

/// Inverse of `a` mod prime `p`; `a` must not be divisible by `p`.
pub fn mod_inverse(a: &Int, p: &Int) -> Int {
    let a = reduce(a, p);
    assert!(!a.is_zero(), "inverse of 0 mod p");
    let eg = a.extended_gcd(p);
    debug_assert!(eg.gcd.is_one());
    reduce(&eg.x, p)
}

/// Solve `M x = b (mod p)` by Gaussian elimination over F_p. Returns one
/// solution with free variables pinned to 0, or `None` when inconsistent.
pub fn solve_mod_p(m: &IntMatrix, b: &[Int], p: &Int) -> Result<Option<Vec<Int>>, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if m.rows() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "matrix has {} rows but rhs has {} entries",
            m.rows(),
            b.len()
        )));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = IntMatrix::zero(rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            *a.at_mut(r, c) = reduce(m.at(r, c), p);
        }
        *a.at_mut(r, cols) = reduce(&b[r], p);
    }
    let mut pivots = Vec::new();
    let mut pr = 0;
    for pc in 0..cols {
        if pr >= rows {
            break;
        }
        let Some(nz) = (pr..rows).find(|&r| !a.at(r, pc).is_zero()) else {
            continue;
        };
        a.swap_rows(nz, pr);
        let inv = mod_inverse(a.at(pr, pc), p);
        for c in pc..=cols {
            let v = reduce(&(a.at(pr, c) * &inv), p);
            *a.at_mut(pr, c) = v;
        }
        for r in 0..rows {
            if r == pr || a.at(r, pc).is_zero() {
                continue;
            }
            let factor = a.at(r, pc).clone();
            for c in pc..=cols {
                let v = reduce(&(a.at(r, c) - &factor * a.at(pr, c)), p);
                *a.at_mut(r, c) = v;
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for r in pivots.len()..rows {
        if !a.at(r, cols).is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Int::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a.at(r, cols).clone();
    }
    Ok(Some(x))
}

/// Rank of `M` over F_p.
pub fn rank_mod_p(m: &IntMatrix, p: &Int) -> Result<usize, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = IntMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            *a.at_mut(r, c) = reduce(m.at(r, c), p);
        }
    }
    let mut rank = 0;
    for pc in 0..cols {
        if rank >= rows {
            break;
        }
        let Some(nz) = (rank..rows).find(|&r| !a.at(r, pc).is_zero()) else {
            continue;
        };
        a.swap_rows(nz, rank);
        let inv = mod_inverse(a.at(rank, pc), p);
        for r in rank + 1..rows {
            if a.at(r, pc).is_zero() {
                continue;
            }
            let factor = reduce(&(a.at(r, pc) * &inv), p);
            for c in pc..cols {
                let v = reduce(&(a.at(r, c) - &factor * a.at(rank, c)), p);
                *a.at_mut(r, c) = v;
            }
        }
        rank += 1;
    }
    Ok(rank)
}
