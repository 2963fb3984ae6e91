//! Rank partitions of solutions and the level congruences they satisfy.
//!
//! Given an exact solution whose groups are monochromatic under smod p, the
//! variable indices are partitioned by the p-adic orders of their values,
//! levels ascending by order. Indices with value 0 (order infinity) form a
//! distinguished terminal level kept separate from the finite levels.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::colorings::{p_adic_order, smod_int, ColoringRef, Rank};
use crate::error::Error;
use crate::exact_linalg::{mod_inverse, Int, IntVector};
use crate::solution_search::find_semi_mono_witnesses;
use crate::system_model::{evaluate, Assignment, DkSystem};

/// Partition of a solution's index set by p-adic order, with the per-group
/// smod colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPartition {
    /// finite_sets[j][s]: indices of group j whose values have order
    /// `orders[s]`.
    finite_sets: Vec<Vec<Vec<usize>>>,
    /// Strictly increasing finite p-adic orders, one per level.
    orders: Vec<u64>,
    /// Per group, the indices whose value is 0 (the terminal level).
    zero_sets: Vec<Vec<usize>>,
    /// Per group, the common smod-p color; 0 exactly for all-zero groups.
    group_colors: Vec<Int>,
}

/// A rank partition with the rank values discarded; the pigeonhole key for
/// grouping primes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionShape {
    pub finite_sets: Vec<Vec<Vec<usize>>>,
    pub zero_sets: Vec<Vec<usize>>,
}

impl RankPartition {
    /// Number of finite levels.
    pub fn level_count(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn finite_sets(&self) -> &[Vec<Vec<usize>>] {
        &self.finite_sets
    }

    pub fn zero_sets(&self) -> &[Vec<usize>] {
        &self.zero_sets
    }

    pub fn group_colors(&self) -> &[Int] {
        &self.group_colors
    }

    pub fn shape(&self) -> PartitionShape {
        PartitionShape {
            finite_sets: self.finite_sets.clone(),
            zero_sets: self.zero_sets.clone(),
        }
    }

    /// Whether any index sits in the terminal (order-infinity) level.
    pub fn has_zero_level(&self) -> bool {
        self.zero_sets.iter().any(|s| !s.is_empty())
    }
}

/// Partition an exact nontrivial solution by the p-adic orders of its
/// values. Errors when the assignment is not a nontrivial exact solution or
/// when some group is not monochromatic under smod p.
pub fn rank_partition(sys: &DkSystem, a: &Assignment, p: &Int) -> Result<RankPartition, Error> {
    let value = evaluate(sys, a)?;
    if value.iter().any(|x| !x.is_zero()) || a.is_all_zero() {
        return Err(Error::NotASolution);
    }
    let k = sys.group_count();
    let mut group_colors = Vec::with_capacity(k);
    let mut zero_sets: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut finite_orders: Vec<Vec<(usize, u64)>> = vec![Vec::new(); k];
    for (j, group) in a.groups().iter().enumerate() {
        let mut color: Option<Int> = None;
        for (i, z) in group.iter().enumerate() {
            let c = smod_int(z, p)?;
            match &color {
                None => color = Some(c),
                Some(seen) if *seen != c => {
                    return Err(Error::GroupNotMonochromatic { group: j + 1 })
                }
                _ => {}
            }
            match p_adic_order(z, p)? {
                Rank::Infinite => zero_sets[j].push(i),
                Rank::Finite(m) => finite_orders[j].push((i, m)),
            }
        }
        group_colors.push(color.expect("groups are nonempty"));
    }
    let mut distinct: Vec<u64> = finite_orders
        .iter()
        .flatten()
        .map(|&(_, m)| m)
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    let level_of = |m: u64| distinct.binary_search(&m).expect("order is present");
    let mut finite_sets: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); distinct.len()]; k];
    for (j, orders) in finite_orders.iter().enumerate() {
        for &(i, m) in orders {
            finite_sets[j][level_of(m)].push(i);
        }
    }
    Ok(RankPartition {
        finite_sets,
        orders: distinct,
        zero_sets,
        group_colors,
    })
}

/// Check the level congruences of a rank partition against its solution.
///
/// With w the mod-p inverse of the pivot group's color and beta_j = w *
/// alpha_j, the checks are: sum_j beta_j A_{j,1} = 0 (mod p), and for each
/// finite level s > 1,
///   w * sum over earlier finite levels of z_{j,i} a_{j,i}
///     = -p^{m_s} * sum_j beta_j A_{j,s}   (mod p^{m_s + 1}).
pub fn verify_rank_congruences(
    sys: &DkSystem,
    a: &Assignment,
    p: &Int,
    rp: &RankPartition,
    pivot_group: usize,
) -> Result<bool, Error> {
    if !a.matches_shape(sys) || rp.finite_sets.len() != sys.group_count() {
        return Err(Error::ShapeMismatch(
            "assignment or partition differs from system".into(),
        ));
    }
    let alpha_pivot = &rp.group_colors[pivot_group];
    if alpha_pivot.is_zero() {
        return Err(Error::PivotColorZero {
            group: pivot_group + 1,
        });
    }
    let k = sys.group_count();
    let dim = sys.dim();
    let w = mod_inverse(alpha_pivot, p);
    let betas: Vec<Int> = rp
        .group_colors
        .iter()
        .map(|alpha| (&w * alpha).mod_floor(p))
        .collect();
    // Level 1 congruence mod p.
    for d in 0..dim {
        let mut acc = Int::zero();
        for j in 0..k {
            let sum = sys.coeff_sum(j, &rp.finite_sets[j][0]);
            acc += &betas[j] * &sum[d];
        }
        if !acc.mod_floor(p).is_zero() {
            return Ok(false);
        }
    }
    // Higher levels mod p^{m_s + 1}.
    for s in 1..rp.level_count() {
        let modulus = p.pow(rp.orders[s] as u32 + 1);
        let scale = p.pow(rp.orders[s] as u32);
        for d in 0..dim {
            let mut lhs = Int::zero();
            for earlier in 0..s {
                for j in 0..k {
                    for &i in &rp.finite_sets[j][earlier] {
                        lhs += a.get(j, i) * &sys.coeff(j, i)[d];
                    }
                }
            }
            lhs *= &w;
            let mut rhs = Int::zero();
            for j in 0..k {
                let sum = sys.coeff_sum(j, &rp.finite_sets[j][s]);
                rhs += &betas[j] * &sum[d];
            }
            rhs *= &scale;
            // The solution splits as (earlier levels) + (levels >= s), so the
            // earlier part is the negative of the tail.
            if !(lhs + rhs).mod_floor(&modulus).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One prime's contribution to the pigeonhole grouping.
#[derive(Debug, Clone)]
pub struct ClassMember {
    pub prime: u64,
    pub assignment: Assignment,
    pub colors: Vec<crate::colorings::ColorId>,
    pub rank_partition: RankPartition,
}

/// All primes that produced the same partition shape.
#[derive(Debug, Clone)]
pub struct PartitionClass {
    pub shape: PartitionShape,
    pub members: Vec<ClassMember>,
}

#[derive(Debug, Clone)]
pub struct PrimeGrouping {
    pub classes: Vec<PartitionClass>,
    /// Primes with no semi-monochromatic solution inside the window.
    pub unsolved: Vec<u64>,
}

/// How many witnesses each prime contributes to the pigeonhole grouping.
/// One witness per prime is enough in principle (any solution serves the
/// argument), but at desk scale a single unlucky witness shape can hide the
/// persistent one, so each prime reports the distinct shapes among its
/// first few witnesses.
pub const DEFAULT_WITNESSES_PER_PRIME: usize = 8;

/// For each prime, search the window for semi-monochromatic solutions
/// under smod p and key the found solutions by their partition shape; each
/// prime contributes at most one member per distinct shape. Absence of a
/// witness (or a budget cutoff) is data, not an error.
pub fn group_primes_by_partition(
    sys: &DkSystem,
    primes: &[u64],
    window: i64,
    budget: Option<u64>,
) -> Result<PrimeGrouping, Error> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    let results: Result<Vec<Vec<ClassMember>>, Error> = primes
        .par_iter()
        .map(|&prime| {
            let coloring = ColoringRef::smod(prime)?;
            let (witnesses, _exhausted) = find_semi_mono_witnesses(
                sys,
                &coloring,
                window,
                budget,
                DEFAULT_WITNESSES_PER_PRIME,
            )?;
            let mut members: Vec<ClassMember> = Vec::new();
            for (assignment, colors) in witnesses {
                let rp = rank_partition(sys, &assignment, &Int::from(prime))?;
                if members
                    .iter()
                    .any(|m| m.rank_partition.shape() == rp.shape())
                {
                    continue;
                }
                members.push(ClassMember {
                    prime,
                    assignment,
                    colors,
                    rank_partition: rp,
                });
            }
            Ok(members)
        })
        .collect();
    let mut classes: BTreeMap<PartitionShape, Vec<ClassMember>> = BTreeMap::new();
    let mut unsolved = Vec::new();
    for (members, &prime) in results?.into_iter().zip(primes) {
        if members.is_empty() {
            unsolved.push(prime);
            continue;
        }
        for m in members {
            classes
                .entry(m.rank_partition.shape())
                .or_default()
                .push(m);
        }
    }
    Ok(PrimeGrouping {
        classes: classes
            .into_iter()
            .map(|(shape, members)| PartitionClass { shape, members })
            .collect(),
        unsolved,
    })
}

/// Sum of z_{j,i} * a_{j,i} over one group's index subset.
#[allow(dead_code)]
pub(crate) fn value_weighted_sum(
    sys: &DkSystem,
    a: &Assignment,
    j: usize,
    set: &[usize],
) -> IntVector {
    let mut out = vec![Int::zero(); sys.dim()];
    for &i in set {
        for d in 0..sys.dim() {
            out[d] += a.get(j, i) * &sys.coeff(j, i)[d];
        }
    }
    out
}
