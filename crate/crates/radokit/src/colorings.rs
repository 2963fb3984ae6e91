//! smod-p colorings, p-adic rank, and product colorings.
//!
//! For a nonzero rational q and a prime p, write q = p^m * (a/b) with
//! p dividing neither a nor b. The smod-p color of q is a * b^{-1} mod p,
//! extended by color 0 for the input 0. The exponent m is the rank of q.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact_linalg::{is_prime, is_prime_u64, mod_inverse, Int, Rational};

/// Dense color identifier. Table colorings use arbitrary ids; smod-p uses
/// the residue itself.
pub type ColorId = u64;

/// p-adic order of an integer; infinite exactly for 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(m) => Some(m),
            Rank::Infinite => None,
        }
    }
}

/// Largest m with p^m dividing n; infinite for n = 0.
pub fn p_adic_order(n: &Int, p: &Int) -> Result<Rank, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if n.is_zero() {
        return Ok(Rank::Infinite);
    }
    let mut m = 0u64;
    let mut v = n.clone();
    loop {
        let (q, r) = v.div_rem(p);
        if !r.is_zero() {
            return Ok(Rank::Finite(m));
        }
        v = q;
        m += 1;
    }
}

/// smod-p color of a rational: strip all powers of p, then reduce the
/// p-free part a/b to a * b^{-1} in [0, p). smod(0) = 0.
pub fn smod(q: &Rational, p: &Int) -> Result<Int, Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if q.is_zero() {
        return Ok(Int::zero());
    }
    let a = strip_p(q.numer(), p);
    let b = strip_p(q.denom(), p);
    let inv = mod_inverse(&b, p);
    Ok((a * inv).mod_floor(p))
}

/// smod-p color of an integer.
pub fn smod_int(n: &Int, p: &Int) -> Result<Int, Error> {
    smod(&Rational::from_integer(n.clone()), p)
}

fn strip_p(n: &Int, p: &Int) -> Int {
    let mut v = n.clone();
    loop {
        let (q, r) = v.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v = q;
    }
}

/// A total coloring of the integers in an explicit window [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableColoring {
    lo: i64,
    hi: i64,
    colors: Vec<ColorId>,
}

impl TableColoring {
    /// Build from a window and one color per integer, ordered from lo to hi.
    pub fn new(lo: i64, hi: i64, colors: Vec<ColorId>) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::Parse(crate::error::ParseError::BadWindow {
                reason: format!("lo = {lo} > hi = {hi}"),
            }));
        }
        let len = (hi - lo + 1) as usize;
        if colors.len() != len {
            return Err(Error::Parse(crate::error::ParseError::BadWindow {
                reason: format!("expected {len} colors, got {}", colors.len()),
            }));
        }
        Ok(TableColoring { lo, hi, colors })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn color(&self, z: i64) -> Result<ColorId, Error> {
        if z < self.lo || z > self.hi {
            return Err(Error::OutsideWindow {
                value: z,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.colors[(z - self.lo) as usize])
    }

    pub fn color_count(&self) -> usize {
        let mut seen: Vec<ColorId> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, ColorId)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }
}

/// A coloring reference: the built-in smod-p family (total on all of Z) or
/// an explicit table on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringRef {
    Smod { p: u64 },
    Table(TableColoring),
}

impl ColoringRef {
    /// Built-in smod-p coloring. The prime must fit in 32 bits so residues
    /// stay valid dense color ids.
    pub fn smod(p: u64) -> Result<Self, Error> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if p > u32::MAX as u64 {
            return Err(Error::PrimeTooLargeForColoring(p.to_string()));
        }
        Ok(ColoringRef::Smod { p })
    }

    pub fn table(t: TableColoring) -> Self {
        ColoringRef::Table(t)
    }

    /// Color of a machine integer.
    pub fn color(&self, z: i64) -> Result<ColorId, Error> {
        match self {
            ColoringRef::Smod { p } => Ok(smod_i64(z, *p)),
            ColoringRef::Table(t) => t.color(z),
        }
    }

    /// Color of a big integer.
    pub fn color_big(&self, z: &Int) -> Result<ColorId, Error> {
        match self {
            ColoringRef::Smod { p } => {
                let r = smod_int(z, &Int::from(*p)).expect("prime checked at construction");
                Ok(r.to_u64().expect("residue below p < 2^32"))
            }
            ColoringRef::Table(t) => {
                // Anything outside i64 is certainly outside the window.
                let z = z.to_i64().unwrap_or(if z.is_negative() {
                    i64::MIN
                } else {
                    i64::MAX
                });
                t.color(z)
            }
        }
    }

    /// Whether the coloring is defined on all of [-r, r].
    pub fn covers_window(&self, r: i64) -> bool {
        match self {
            ColoringRef::Smod { .. } => true,
            ColoringRef::Table(t) => t.lo <= -r && t.hi >= r,
        }
    }

    /// Short human id used in reports.
    pub fn describe(&self) -> String {
        match self {
            ColoringRef::Smod { p } => format!("smod:{p}"),
            ColoringRef::Table(t) => format!("table[{},{}]", t.lo, t.hi),
        }
    }
}

/// smod-p of an i64 without big-integer overhead.
fn smod_i64(z: i64, p: u64) -> u64 {
    if z == 0 {
        return 0;
    }
    let p = p as i128;
    let mut v = z as i128;
    while v % p == 0 {
        v /= p;
    }
    (v.rem_euclid(p)) as u64
}

/// Product coloring: color z by the tuple (chi(d_1 z), ..., chi(d_m z)),
/// with tuple colors canonicalized to dense ids in first-seen order over a
/// left-to-right window sweep.
pub fn product_coloring(
    chi: &ColoringRef,
    weights: &[Int],
    window: (i64, i64),
) -> Result<TableColoring, Error> {
    assert!(
        weights.iter().all(|w| !w.is_zero()),
        "product coloring weights must be nonzero"
    );
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Parse(crate::error::ParseError::BadWindow {
            reason: format!("lo = {lo} > hi = {hi}"),
        }));
    }
    let mut ids: Vec<(Vec<ColorId>, ColorId)> = Vec::new();
    let mut colors = Vec::with_capacity((hi - lo + 1) as usize);
    for z in lo..=hi {
        let mut tuple = Vec::with_capacity(weights.len());
        for w in weights {
            let scaled = w * Int::from(z);
            tuple.push(chi.color_big(&scaled)?);
        }
        let id = match ids.iter().find(|(t, _)| *t == tuple) {
            Some((_, id)) => *id,
            None => {
                let id = ids.len() as ColorId;
                ids.push((tuple, id));
                id
            }
        };
        colors.push(id);
    }
    TableColoring::new(lo, hi, colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;

    #[test]
    fn p_adic_order_examples() {
        assert_eq!(
            p_adic_order(&Int::from(12), &Int::from(2)).unwrap(),
            Rank::Finite(2)
        );
        assert_eq!(
            p_adic_order(&Int::from(0), &Int::from(7)).unwrap(),
            Rank::Infinite
        );
        assert_eq!(
            p_adic_order(&Int::from(5), &Int::from(3)).unwrap(),
            Rank::Finite(0)
        );
        assert!(p_adic_order(&Int::from(5), &Int::from(4)).is_err());
    }

    #[test]
    fn smod_examples() {
        assert_eq!(smod_int(&Int::from(50), &Int::from(5)).unwrap(), Int::from(2));
        assert_eq!(smod_int(&Int::from(0), &Int::from(7)).unwrap(), Int::from(0));
        assert_eq!(smod_int(&Int::from(-6), &Int::from(3)).unwrap(), Int::from(1));
        // smod 3 of 6, -6, 2, 1.
        let p = Int::from(3);
        let got: Vec<Int> = [6, -6, 2, 1]
            .iter()
            .map(|&n| smod_int(&Int::from(n), &p).unwrap())
            .collect();
        assert_eq!(got, vec![Int::from(2), Int::from(1), Int::from(2), Int::from(1)]);
    }

    #[test]
    fn smod_on_rationals() {
        // 50/3 = 5^2 * (2/3) mod 5: 2 * 3^{-1} = 2 * 2 = 4.
        assert_eq!(smod(&rat(50, 3), &Int::from(5)).unwrap(), Int::from(4));
    }

    #[test]
    fn smod_is_never_zero_on_nonzero_inputs() {
        for p in [2u64, 3, 5, 7] {
            let pb = Int::from(p);
            for n in -40i64..=40 {
                if n == 0 {
                    continue;
                }
                assert!(!smod_int(&Int::from(n), &pb).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn smod_multiplicative() {
        let p = Int::from(7);
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 || b == 0 {
                    continue;
                }
                let lhs = smod_int(&Int::from(a * b), &p).unwrap();
                let rhs =
                    (smod_int(&Int::from(a), &p).unwrap() * smod_int(&Int::from(b), &p).unwrap())
                        .mod_floor(&p);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn smod_i64_agrees_with_bigint() {
        for p in [2u64, 3, 5, 13] {
            let pb = Int::from(p);
            for z in -100i64..=100 {
                assert_eq!(
                    smod_i64(z, p),
                    smod_int(&Int::from(z), &pb).unwrap().to_u64().unwrap()
                );
            }
        }
    }

    #[test]
    fn table_coloring_window() {
        let t = TableColoring::new(-2, 2, vec![0, 1, 0, 1, 0]).unwrap();
        assert_eq!(t.color(-2).unwrap(), 0);
        assert_eq!(t.color(1).unwrap(), 1);
        assert!(matches!(t.color(3), Err(Error::OutsideWindow { .. })));
    }

    #[test]
    fn product_coloring_examples() {
        // chi = smod 3, weights (5, -4): z = 1 maps to (smod3(5), smod3(-4)) = (2, 2).
        let chi = ColoringRef::smod(3).unwrap();
        let weights = vec![Int::from(5), Int::from(-4)];
        let t = product_coloring(&chi, &weights, (-6, 6)).unwrap();
        // z = -2 has the same tuple (smod3(-10), smod3(8)) = (2, 2).
        assert_eq!(t.color(1).unwrap(), t.color(-2).unwrap());
        // at most 3^2 colors
        assert!(t.color_count() <= 9);

        // weights (1): the product is chi itself up to renaming.
        let t = product_coloring(&chi, &[Int::from(1)], (-6, 6)).unwrap();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                assert_eq!(
                    t.color(a).unwrap() == t.color(b).unwrap(),
                    chi.color(a).unwrap() == chi.color(b).unwrap()
                );
            }
        }

        // weight pushing outside a table window is an error.
        let table = ColoringRef::table(TableColoring::new(-3, 3, vec![0; 7]).unwrap());
        assert!(product_coloring(&table, &[Int::from(2)], (-3, 3)).is_err());
    }
}
