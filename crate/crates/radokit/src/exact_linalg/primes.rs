//! Deterministic primality testing, integer factorization, and the excluded
//! prime set of a wide integer matrix.
//!
//! Factorization is trial division up to 10^6 followed by Pollard-Brent rho.
//! Minors at desk scale are small, but the contract must not silently
//! truncate, so the rho stage handles arbitrary leftovers.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::minors::maximal_minors;
use super::Int;
use crate::error::Error;

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Deterministic Miller-Rabin. The fixed base set decides every n < 3.3e24
/// exactly; far beyond any minor this crate meets.
pub fn is_prime(n: &Int) -> bool {
    if *n < Int::from(2) {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = Int::from(small);
        if *n == p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let one = Int::one();
    let n_minus_1 = n - &one;
    let r = trailing_zeros(&n_minus_1);
    let d = &n_minus_1 >> r;
    'base: for base in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Int::from(base).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = x.modpow(&Int::from(2), n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn trailing_zeros(n: &Int) -> u64 {
    let mut k = 0;
    let mut m = n.clone();
    let two = Int::from(2);
    while m.is_even() && !m.is_zero() {
        m /= &two;
        k += 1;
    }
    k
}

/// Prime factorization of |n| for n != 0; the unit factor is dropped.
pub fn factorize(n: &Int) -> Vec<(Int, u32)> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "factorize(0)");
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let push = |p: Int, e: u32, factors: &mut Vec<(Int, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += e;
        } else {
            factors.push((p, e));
        }
    };
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND {
        let p = Int::from(d);
        if &p * &p > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            push(p, e, &mut factors);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if m > Int::one() {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if is_prime(&c) {
                push(c, 1, &mut factors);
            } else {
                let f = pollard_rho(&c);
                stack.push(&c / &f);
                stack.push(f);
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    factors
}

/// Pollard-Brent rho with a deterministic parameter schedule. The input is
/// odd, composite, and has no factor below the trial division bound.
fn pollard_rho(n: &Int) -> Int {
    let one = Int::one();
    let mut c = Int::one();
    loop {
        let mut x = Int::from(2);
        let mut y = Int::from(2);
        let mut d = Int::one();
        let step = |v: &Int| (v * v + &c) % n;
        let mut count = 0u64;
        while d == one {
            x = step(&x);
            y = step(&step(&y));
            d = (&x - &y).abs().gcd(n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != one && &d != n {
            return d;
        }
        c += 1;
    }
}

/// Outcome of `excluded_primes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExcludedPrimes {
    /// The primes dividing at least one maximal minor. For any prime outside
    /// this set, every maximal minor stays nonzero mod p.
    Primes(BTreeSet<Int>),
    /// Some maximal minor vanishes over Z; the hypothesis fails. The column
    /// tuple of the first vanishing minor is reported.
    Degenerate { columns: Vec<usize> },
}

/// The excluded-prime set of a wide integer matrix whose maximal minors are
/// all expected to be nonzero.
pub fn excluded_primes(m: &IntMatrix) -> Result<ExcludedPrimes, Error> {
    let minors = maximal_minors(m)?;
    let mut primes = BTreeSet::new();
    for (cols, det) in &minors {
        if det.is_zero() {
            return Ok(ExcludedPrimes::Degenerate {
                columns: cols.clone(),
            });
        }
    }
    for (_, det) in &minors {
        if det.abs().is_one() {
            continue;
        }
        for (p, _) in factorize(det) {
            primes.insert(p);
        }
    }
    Ok(ExcludedPrimes::Primes(primes))
}

/// All primes up to `n` inclusive, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let size = (n as usize) + 1;
    let mut sieve = vec![true; size];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p < size {
        if sieve[p] {
            let mut q = p * p;
            while q < size {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// u64 convenience wrapper around `is_prime`.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&Int::from(n))
}
