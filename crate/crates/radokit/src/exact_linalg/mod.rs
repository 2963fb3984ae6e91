//! Exact arbitrary-precision linear algebra over Z and Q.
//!
//! Everything here is deterministic and exact: rational Gaussian
//! elimination, row Hermite normal form with a fixed normal shape, maximal
//! minors by cofactor/Bareiss, excluded-prime sets, and solving mod p. No
//! floating point anywhere.

mod elimination;
mod hnf;
mod matrix;
mod minors;
mod modp;
mod primes;

pub use elimination::{
    in_rational_span, integer_inconsistency_witness, nullspace_rational, rank_rational, rref,
    solve_rational_system,
};
pub use hnf::{hermite_normal_form, in_integer_span, integer_span_denominator};
pub use matrix::{IntMatrix, RatMatrix};
pub use minors::{combinations, determinant, maximal_minors};
pub use modp::{mod_inverse, rank_mod_p, solve_mod_p};
pub use primes::{
    excluded_primes, factorize, is_prime, is_prime_u64, primes_up_to, ExcludedPrimes,
};

/// Arbitrary-precision integer scalar.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational scalar; always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

pub type IntVector = Vec<Int>;
pub type RatVector = Vec<Rational>;

/// n/d as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// n as an exact rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Least common multiple of the denominators of a rational vector.
pub fn denominator_lcm(xs: &[Rational]) -> Int {
    use num_integer::Integer;
    let mut l = Int::from(1);
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}

/// Greatest common divisor of the absolute values of an integer vector.
pub fn content_gcd(xs: &[Int]) -> Int {
    use num_integer::Integer;
    use num_traits::Zero;
    let mut g = Int::zero();
    for x in xs {
        g = g.gcd(x);
    }
    g
}
