//! The k-partite columns condition: a shared level structure across the k
//! variable groups plus not-all-zero integer weights making the weighted
//! level sums satisfy the span conditions.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::classic::check_columns_condition;
use super::partitions::{walk_level_words, WalkResult};
use crate::error::Error;
use crate::exact_linalg::{
    content_gcd, denominator_lcm, integer_span_denominator, nullspace_rational, Int, IntVector,
    RatMatrix, RatVector, Rational,
};
use crate::system_model::{scaled_system, DkSystem};

/// Shared level structure: for each group j, an ordered partition of its
/// index set [N_j] into t (possibly per-group-empty) subsets. No level may
/// be empty in every group at once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LevelPartition {
    t: usize,
    /// sets[j][s] = sorted 0-based indices of group j at level s.
    sets: Vec<Vec<Vec<usize>>>,
}

impl LevelPartition {
    pub fn new(group_sizes: &[usize], sets: Vec<Vec<Vec<usize>>>) -> Result<Self, Error> {
        if sets.len() != group_sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} groups in partition, {} in system",
                sets.len(),
                group_sizes.len()
            )));
        }
        let t = sets.first().map_or(0, Vec::len);
        if t == 0 {
            return Err(Error::ShapeMismatch("partition has no levels".into()));
        }
        for (j, group) in sets.iter().enumerate() {
            if group.len() != t {
                return Err(Error::ShapeMismatch(format!(
                    "group {j} has {} levels, expected {t}",
                    group.len()
                )));
            }
            let mut seen = vec![false; group_sizes[j]];
            for level in group {
                for &i in level {
                    if i >= group_sizes[j] || seen[i] {
                        return Err(Error::ShapeMismatch(format!(
                            "group {j} does not partition its index set"
                        )));
                    }
                    seen[i] = true;
                }
            }
            if !seen.iter().all(|&b| b) {
                return Err(Error::ShapeMismatch(format!(
                    "group {j} does not cover its index set"
                )));
            }
        }
        for s in 0..t {
            if sets.iter().all(|group| group[s].is_empty()) {
                return Err(Error::ShapeMismatch(format!("level {} is empty", s + 1)));
            }
        }
        Ok(LevelPartition { t, sets })
    }

    /// Build from a flat level word over the variables in scan order.
    pub(crate) fn from_level_word(group_sizes: &[usize], word: &[usize], t: usize) -> Self {
        let mut sets: Vec<Vec<Vec<usize>>> = group_sizes
            .iter()
            .map(|&n| {
                let mut g = Vec::with_capacity(t);
                g.resize(t, Vec::new());
                let _ = n;
                g
            })
            .collect();
        let mut pos = 0;
        for (j, &n) in group_sizes.iter().enumerate() {
            for i in 0..n {
                sets[j][word[pos]].push(i);
                pos += 1;
            }
        }
        LevelPartition { t, sets }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn group_count(&self) -> usize {
        self.sets.len()
    }

    /// Indices of group j at level s (both 0-based).
    pub fn set(&self, j: usize, s: usize) -> &[usize] {
        &self.sets[j][s]
    }

    pub fn sets(&self) -> &[Vec<Vec<usize>>] {
        &self.sets
    }

    pub fn matches(&self, s: &DkSystem) -> bool {
        self.sets.len() == s.group_count()
            && (0..self.sets.len()).all(|j| {
                let total: usize = self.sets[j].iter().map(Vec::len).sum();
                total == s.group_size(j)
            })
    }

    /// Level sum A_{j,s}.
    pub fn level_sum(&self, sys: &DkSystem, j: usize, s: usize) -> IntVector {
        sys.coeff_sum(j, &self.sets[j][s])
    }

    /// The coefficient vectors of all levels before `s`, in (level, group,
    /// index) lexicographic order. This order also fixes the meaning of the
    /// combination coefficients in certificates.
    pub fn earlier_vectors(&self, sys: &DkSystem, s: usize) -> Vec<IntVector> {
        let mut out = Vec::new();
        for earlier_level in 0..s {
            for (j, group) in self.sets.iter().enumerate() {
                for &i in &group[earlier_level] {
                    out.push(sys.coeff(j, i).clone());
                }
            }
        }
        out
    }

    /// JSON rendering with 1-based indices: partition[j][s] = [i, ...].
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.sets
                .iter()
                .map(|group| {
                    Value::Array(
                        group
                            .iter()
                            .map(|level| {
                                Value::Array(
                                    level.iter().map(|&i| Value::from(i as u64 + 1)).collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// A verifiable witness of the k-columns condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCertificate {
    pub partition: LevelPartition,
    /// Integer weights, not all zero.
    pub delta: Vec<Int>,
    /// combos[s-2]: integer coefficients over the earlier vectors of level s
    /// in the partition's (level, group, index) order.
    pub combos: Vec<Vec<Int>>,
}

impl KCertificate {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("t".into(), Value::from(self.partition.t() as u64));
        obj.insert("partition".into(), self.partition.to_json());
        obj.insert(
            "delta".into(),
            Value::Array(self.delta.iter().map(crate::system_model::int_to_json).collect()),
        );
        obj.insert(
            "combos".into(),
            Value::Array(
                self.combos
                    .iter()
                    .map(|c| {
                        Value::Array(c.iter().map(crate::system_model::int_to_json).collect())
                    })
                    .collect(),
            ),
        );
        Value::Object(obj)
    }
}

/// Basis of the rational space of admissible weight vectors for a fixed
/// partition: { delta : sum_j delta_j A_{j,1} = 0 and for s >= 2,
/// sum_j delta_j A_{j,s} lies in the rational span of the earlier vectors }.
/// The partition admits an integer certificate iff this space is nonzero.
pub fn delta_space(sys: &DkSystem, partition: &LevelPartition) -> Result<Vec<RatVector>, Error> {
    if !partition.matches(sys) {
        return Err(Error::ShapeMismatch(
            "partition shape differs from system".into(),
        ));
    }
    Ok(delta_space_unchecked(sys, partition))
}

fn delta_space_unchecked(sys: &DkSystem, partition: &LevelPartition) -> Vec<RatVector> {
    let k = sys.group_count();
    let dim = sys.dim();
    let mut constraint_rows: Vec<Vec<Rational>> = Vec::new();
    // Level 1: the weighted sums must vanish coordinate-wise; row d has
    // entry A_{j,1}^{(d)} at column j.
    let first_sums: Vec<IntVector> = (0..k).map(|j| partition.level_sum(sys, j, 0)).collect();
    for d in 0..dim {
        constraint_rows.push(
            first_sums
                .iter()
                .map(|sums| Rational::from_integer(sums[d].clone()))
                .collect(),
        );
    }
    // Levels >= 2: project the weighted sum onto the orthogonal complement
    // of the earlier vectors' span; each complement basis vector contributes
    // one linear constraint on delta.
    for s in 1..partition.t() {
        let earlier = partition.earlier_vectors(sys, s);
        let e_mat = RatMatrix::from_rows(
            earlier
                .iter()
                .map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect())
                .collect(),
        );
        let complement = nullspace_rational(&e_mat);
        if complement.is_empty() {
            continue; // earlier vectors span all of Q^D
        }
        let sums: Vec<IntVector> = (0..k).map(|j| partition.level_sum(sys, j, s)).collect();
        for u in complement {
            let row: Vec<Rational> = (0..k)
                .map(|j| {
                    let mut dot = Rational::zero();
                    for d in 0..dim {
                        dot += &u[d] * Rational::from_integer(sums[j][d].clone());
                    }
                    dot
                })
                .collect();
            constraint_rows.push(row);
        }
    }
    nullspace_rational(&RatMatrix::from_rows(constraint_rows))
}

/// Turn a rational direction in the delta space into an integer certificate:
/// make the direction primitive (integer entries, content 1, first nonzero
/// entry positive), then scale by the smallest positive multiple for which
/// every level admits integer combination coefficients.
pub(crate) fn assemble_certificate(
    sys: &DkSystem,
    partition: &LevelPartition,
    direction: &[Rational],
) -> Option<KCertificate> {
    let k = sys.group_count();
    debug_assert_eq!(direction.len(), k);
    let scale = denominator_lcm(direction);
    let mut primitive: Vec<Int> = direction
        .iter()
        .map(|q| (q * Rational::from_integer(scale.clone())).to_integer())
        .collect();
    let content = content_gcd(&primitive);
    if content.is_zero() {
        return None;
    }
    if !content.is_one() {
        for x in &mut primitive {
            *x = &*x / &content;
        }
    }
    if let Some(first) = primitive.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut primitive {
                *x = -x.clone();
            }
        }
    }
    // Minimal multiplier so that every level's weighted sum is an integer
    // combination of the earlier vectors.
    let mut per_level: Vec<(Int, Vec<Int>)> = Vec::new();
    let mut multiplier = Int::one();
    for s in 1..partition.t() {
        let target = weighted_level_sum(sys, partition, &primitive, s);
        let earlier = partition.earlier_vectors(sys, s);
        let (d, coeffs) = integer_span_denominator(&earlier, &target)?;
        multiplier = multiplier.lcm(&d);
        per_level.push((d, coeffs));
    }
    let delta: Vec<Int> = primitive.iter().map(|x| x * &multiplier).collect();
    let combos: Vec<Vec<Int>> = per_level
        .into_iter()
        .map(|(d, coeffs)| {
            let factor = &multiplier / &d;
            coeffs.into_iter().map(|c| c * &factor).collect()
        })
        .collect();
    let cert = KCertificate {
        partition: partition.clone(),
        delta,
        combos,
    };
    debug_assert_eq!(verify_k_certificate(sys, &cert), Ok(true));
    Some(cert)
}

fn weighted_level_sum(
    sys: &DkSystem,
    partition: &LevelPartition,
    delta: &[Int],
    s: usize,
) -> IntVector {
    let mut out = vec![Int::zero(); sys.dim()];
    for j in 0..sys.group_count() {
        if delta[j].is_zero() {
            continue;
        }
        let sum = partition.level_sum(sys, j, s);
        for d in 0..sys.dim() {
            out[d] += &delta[j] * &sum[d];
        }
    }
    out
}

/// Exact re-verification of a k-columns certificate: both defining
/// conditions as integer identities, no tolerance.
pub fn verify_k_certificate(sys: &DkSystem, cert: &KCertificate) -> Result<bool, Error> {
    if !cert.partition.matches(sys) {
        return Err(Error::ShapeMismatch(
            "certificate partition differs from system shape".into(),
        ));
    }
    if cert.delta.len() != sys.group_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} groups",
            cert.delta.len(),
            sys.group_count()
        )));
    }
    let t = cert.partition.t();
    if cert.combos.len() + 1 != t {
        return Err(Error::ShapeMismatch(format!(
            "{} combination vectors for {} levels",
            cert.combos.len(),
            t
        )));
    }
    if cert.delta.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    if !weighted_level_sum(sys, &cert.partition, &cert.delta, 0)
        .iter()
        .all(Zero::is_zero)
    {
        return Ok(false);
    }
    for s in 1..t {
        let target = weighted_level_sum(sys, &cert.partition, &cert.delta, s);
        let earlier = cert.partition.earlier_vectors(sys, s);
        let combo = &cert.combos[s - 1];
        if combo.len() != earlier.len() {
            return Err(Error::ShapeMismatch(format!(
                "level {} combination has {} coefficients for {} vectors",
                s + 1,
                combo.len(),
                earlier.len()
            )));
        }
        let mut acc = vec![Int::zero(); sys.dim()];
        for (c, vec) in combo.iter().zip(&earlier) {
            for d in 0..sys.dim() {
                acc[d] += c * &vec[d];
            }
        }
        if acc != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search limits for `check_k_columns_condition`.
#[derive(Debug, Clone, Default)]
pub struct SearchLimits {
    /// Cap on the level count t; defaults to the number of variables.
    pub max_t: Option<usize>,
    /// Cap on enumeration tree nodes; defaults to `DEFAULT_NODE_BUDGET`.
    pub node_budget: Option<u64>,
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Outcome of the k-columns search. `Exhausted` is distinct from `Refuted`
/// so a budget cutoff is never mistaken for a refutation.
#[derive(Debug, Clone)]
pub enum CheckOutcome {
    Found(KCertificate),
    Refuted,
    Exhausted,
}

/// Decide the k-columns condition by exhaustive search over level
/// partitions (t ascending, level words lexicographic). Within a partition
/// the weight space is solved exactly over Q and scaled to integers.
///
/// Among valid certificates, ones whose weight-scaled system also satisfies
/// the classical columns condition are preferred; the first such certificate
/// is returned. If none of the discovered certificates has that property,
/// the first one found is returned instead.
pub fn check_k_columns_condition(
    sys: &DkSystem,
    limits: &SearchLimits,
) -> Result<CheckOutcome, Error> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    let n = sys.total_vars();
    let group_sizes = sys.group_sizes();
    let max_t = limits.max_t.unwrap_or(n).min(n).max(1);
    let mut budget = limits.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let mut fallback: Option<KCertificate> = None;
    for t in 1..=max_t {
        let walk = walk_level_words(n, t, &mut budget, &mut |word| {
            let partition = LevelPartition::from_level_word(&group_sizes, word, t);
            let basis = delta_space_unchecked(sys, &partition);
            let direction = basis.first()?;
            let cert = assemble_certificate(sys, &partition, direction)?;
            if scaled_passes_columns_condition(sys, &cert.delta) {
                return Some(cert);
            }
            if fallback.is_none() {
                fallback = Some(cert);
            }
            None
        });
        match walk {
            WalkResult::Found(cert) => return Ok(CheckOutcome::Found(cert)),
            WalkResult::Exhausted => {
                return Ok(match fallback {
                    Some(cert) => CheckOutcome::Found(cert),
                    None => CheckOutcome::Exhausted,
                })
            }
            WalkResult::Complete => {}
        }
    }
    Ok(match fallback {
        Some(cert) => CheckOutcome::Found(cert),
        None => CheckOutcome::Refuted,
    })
}

/// The reduction step behind sufficiency: scale each group by its weight,
/// drop zero-weight groups, and test the classical condition.
pub fn scaled_passes_columns_condition(sys: &DkSystem, delta: &[Int]) -> bool {
    match scaled_system(sys, delta) {
        Ok(scaled) => check_columns_condition(&scaled.system.column_matrix()).is_some(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{rat, rat_int};
    use crate::test_fixtures::{paper_system, schur_system, x_plus_y_eq_3z};

    fn full_partition(sys: &DkSystem) -> LevelPartition {
        LevelPartition::new(
            &sys.group_sizes(),
            sys.group_sizes()
                .iter()
                .map(|&n| vec![(0..n).collect()])
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn paper_example_certificate() {
        let sys = paper_system();
        let outcome = check_k_columns_condition(&sys, &SearchLimits::default()).unwrap();
        let CheckOutcome::Found(cert) = outcome else {
            panic!("expected certificate");
        };
        assert_eq!(cert.partition.t(), 1);
        assert_eq!(cert.partition.set(0, 0), &[0, 1]);
        assert_eq!(cert.partition.set(1, 0), &[0, 1]);
        assert_eq!(cert.delta, vec![Int::from(5), Int::from(-4)]);
        assert!(cert.combos.is_empty());
        assert_eq!(verify_k_certificate(&sys, &cert), Ok(true));
    }

    #[test]
    fn paper_delta_space_is_one_dimensional() {
        let sys = paper_system();
        let basis = delta_space(&sys, &full_partition(&sys)).unwrap();
        assert_eq!(basis, vec![vec![rat(-5, 4), rat_int(1)]]);
    }

    #[test]
    fn delta_space_degenerate_cases() {
        // All first-level sums zero and a single level: the whole space.
        let sys = DkSystem::from_i64(1, &[&[&[1], &[-1]], &[&[2], &[-2]]]);
        let basis = delta_space(&sys, &full_partition(&sys)).unwrap();
        assert_eq!(basis.len(), 2);

        // Schur matrix in one level: A_1 = 1 forces delta = 0.
        let sys = schur_system();
        let basis = delta_space(&sys, &full_partition(&sys)).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn k1_wrapping_matches_classic_checker() {
        let schur = schur_system();
        let outcome = check_k_columns_condition(&schur, &SearchLimits::default()).unwrap();
        let CheckOutcome::Found(cert) = outcome else {
            panic!("expected certificate");
        };
        assert_eq!(cert.delta, vec![Int::from(1)]);
        assert_eq!(verify_k_certificate(&schur, &cert), Ok(true));

        let bad = x_plus_y_eq_3z();
        assert!(matches!(
            check_k_columns_condition(&bad, &SearchLimits::default()).unwrap(),
            CheckOutcome::Refuted
        ));
    }

    #[test]
    fn group_cancellation_gives_unit_weight() {
        // Group 1 columns cancel; delta = (1, 0) with t = 1.
        let sys = DkSystem::from_i64(1, &[&[&[1], &[-1]], &[&[1]]]);
        let outcome = check_k_columns_condition(&sys, &SearchLimits::default()).unwrap();
        let CheckOutcome::Found(cert) = outcome else {
            panic!("expected certificate");
        };
        assert_eq!(cert.partition.t(), 1);
        assert_eq!(cert.delta, vec![Int::from(1), Int::from(0)]);
    }

    #[test]
    fn weight_must_scale_to_reach_the_lattice() {
        // 2x + y: level structure ({1}, -) / (-, {1}) forces delta_1 = 0 and
        // delta_2 even; the minimal certificate is delta = (0, 2).
        let sys = DkSystem::from_i64(1, &[&[&[2]], &[&[1]]]);
        let partition = LevelPartition::new(
            &[1, 1],
            vec![vec![vec![0], vec![]], vec![vec![], vec![0]]],
        )
        .unwrap();
        let basis = delta_space(&sys, &partition).unwrap();
        assert_eq!(basis.len(), 1);
        let cert = assemble_certificate(&sys, &partition, &basis[0]).unwrap();
        assert_eq!(cert.delta, vec![Int::from(0), Int::from(2)]);
        assert_eq!(cert.combos, vec![vec![Int::from(1)]]);
        assert_eq!(verify_k_certificate(&sys, &cert), Ok(true));
    }

    #[test]
    fn verify_rejects_wrong_weights() {
        let sys = paper_system();
        let outcome = check_k_columns_condition(&sys, &SearchLimits::default()).unwrap();
        let CheckOutcome::Found(mut cert) = outcome else {
            panic!("expected certificate");
        };
        cert.delta = vec![Int::from(5), Int::from(-3)];
        assert_eq!(verify_k_certificate(&sys, &cert), Ok(false));

        cert.delta = vec![Int::from(0), Int::from(0)];
        assert_eq!(verify_k_certificate(&sys, &cert), Ok(false));
    }

    #[test]
    fn degenerate_system_is_refused() {
        let sys = DkSystem::from_i64(1, &[&[&[0], &[0]]]);
        assert!(matches!(
            check_k_columns_condition(&sys, &SearchLimits::default()),
            Err(Error::DegenerateSystem)
        ));
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let sys = x_plus_y_eq_3z();
        let limits = SearchLimits {
            max_t: None,
            node_budget: Some(2),
        };
        assert!(matches!(
            check_k_columns_condition(&sys, &limits).unwrap(),
            CheckOutcome::Exhausted
        ));
    }

    #[test]
    fn empty_per_group_levels_are_allowed() {
        let partition = LevelPartition::new(
            &[1, 1],
            vec![vec![vec![0], vec![]], vec![vec![], vec![0]]],
        );
        assert!(partition.is_ok());

        // A globally empty level is not.
        let bad = LevelPartition::new(
            &[1, 1],
            vec![vec![vec![0], vec![]], vec![vec![0], vec![]]],
        );
        assert!(bad.is_err());
    }
}
