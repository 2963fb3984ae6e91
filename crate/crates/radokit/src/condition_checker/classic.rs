//! The classical columns condition: an ordered partition of the columns
//! whose first block sums to zero and whose later block sums are integer
//! combinations of the earlier columns.

use num_traits::Zero;
use serde_json::{Map, Value};

use super::partitions::{walk_level_words, WalkResult};
use crate::exact_linalg::{in_integer_span, Int, IntMatrix, IntVector};

/// A verifiable witness of the columns condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnsCertificate {
    /// Ordered partition of the column indices (0-based), every block
    /// nonempty.
    pub levels: Vec<Vec<usize>>,
    /// For each level s >= 2, integer coefficients over the columns of the
    /// earlier levels, flattened in (level, position) order.
    pub combos: Vec<Vec<Int>>,
}

impl ColumnsCertificate {
    pub fn t(&self) -> usize {
        self.levels.len()
    }

    /// JSON rendering with 1-based column indices.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("t".into(), Value::from(self.t() as u64));
        obj.insert(
            "levels".into(),
            Value::Array(
                self.levels
                    .iter()
                    .map(|lv| Value::Array(lv.iter().map(|&i| Value::from(i as u64 + 1)).collect()))
                    .collect(),
            ),
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

fn column_sum(columns: &[IntVector], set: &[usize]) -> IntVector {
    let dim = columns.first().map_or(0, Vec::len);
    let mut s = vec![Int::zero(); dim];
    for &i in set {
        for d in 0..dim {
            s[d] += &columns[i][d];
        }
    }
    s
}

/// Exhaustive decision of the columns condition. Returns the first
/// certificate in enumeration order (t ascending, level words
/// lexicographic), or `None` when no ordered partition works.
pub fn check_columns_condition(m: &IntMatrix) -> Option<ColumnsCertificate> {
    let n = m.cols();
    if n == 0 {
        return None;
    }
    let columns: Vec<IntVector> = (0..n).map(|c| m.column(c)).collect();
    for t in 1..=n {
        let mut budget = u64::MAX;
        if let WalkResult::Found(cert) =
            walk_level_words(n, t, &mut budget, &mut |word| {
                certificate_for_word(&columns, word, t)
            })
        {
            return Some(cert);
        }
    }
    None
}

fn certificate_for_word(
    columns: &[IntVector],
    word: &[usize],
    t: usize,
) -> Option<ColumnsCertificate> {
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); t];
    for (i, &s) in word.iter().enumerate() {
        levels[s].push(i);
    }
    if !column_sum(columns, &levels[0]).iter().all(Zero::is_zero) {
        return None;
    }
    let mut earlier: Vec<IntVector> = levels[0].iter().map(|&i| columns[i].clone()).collect();
    let mut combos = Vec::new();
    for level in &levels[1..] {
        let target = column_sum(columns, level);
        let combo = in_integer_span(&earlier, &target)?;
        combos.push(combo);
        earlier.extend(level.iter().map(|&i| columns[i].clone()));
    }
    Some(ColumnsCertificate { levels, combos })
}

/// Exact re-verification of a columns certificate.
pub fn verify_columns_certificate(m: &IntMatrix, cert: &ColumnsCertificate) -> bool {
    let n = m.cols();
    let t = cert.levels.len();
    if t == 0 || cert.combos.len() != t - 1 {
        return false;
    }
    let mut seen = vec![false; n];
    for level in &cert.levels {
        if level.is_empty() {
            return false;
        }
        for &i in level {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&b| b) {
        return false;
    }
    let columns: Vec<IntVector> = (0..n).map(|c| m.column(c)).collect();
    if !column_sum(&columns, &cert.levels[0]).iter().all(Zero::is_zero) {
        return false;
    }
    let mut earlier: Vec<IntVector> = cert.levels[0].iter().map(|&i| columns[i].clone()).collect();
    for (s, level) in cert.levels[1..].iter().enumerate() {
        let target = column_sum(&columns, level);
        let combo = &cert.combos[s];
        if combo.len() != earlier.len() {
            return false;
        }
        let dim = m.rows();
        let mut acc = vec![Int::zero(); dim];
        for (c, vec) in combo.iter().zip(&earlier) {
            for d in 0..dim {
                acc[d] += c * &vec[d];
            }
        }
        if acc != target {
            return false;
        }
        earlier.extend(level.iter().map(|&i| columns[i].clone()));
    }
    true
}
