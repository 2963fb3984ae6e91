//! Shared helpers for the integration suites: seeded corpora and
//! independent brute-force oracles. Everything here deliberately avoids the
//! library's decision paths (HNF, nullspaces): partitions come from a plain
//! odometer, span membership from bounded coefficient boxes, determinants
//! from textbook cofactor expansion.

#![allow(dead_code)]

use std::collections::HashSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radokit::exact_linalg::{Int, IntMatrix};
use radokit::system_model::DkSystem;

/// Seed for the random desk-scale corpus shared by the acceptance criteria.
pub const CORPUS_SEED: u64 = 20260810;

/// 500 seeded random systems with D <= 2, k in {2, 3}, sum N_j <= 5,
/// entries in [-3, 3], none degenerate.
pub fn corpus_500() -> Vec<DkSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::with_capacity(500);
    while out.len() < 500 {
        let sys = random_system(&mut rng);
        if !sys.is_degenerate() {
            out.push(sys);
        }
    }
    out
}

fn random_system(rng: &mut ChaCha8Rng) -> DkSystem {
    let d = rng.gen_range(1..=2usize);
    let k = rng.gen_range(2..=3usize);
    let mut sizes = vec![1usize; k];
    let extra = rng.gen_range(0..=(5 - k));
    for _ in 0..extra {
        let j = rng.gen_range(0..k);
        sizes[j] += 1;
    }
    let blocks: Vec<Vec<Vec<Int>>> = sizes
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| (0..d).map(|_| Int::from(rng.gen_range(-3..=3i64))).collect())
                .collect()
        })
        .collect();
    DkSystem::new(d, blocks).expect("generator emits well-shaped systems")
}

/// All surjective maps [n] -> [t] by plain odometer + filter; the dumbest
/// possible enumeration, used only as an oracle.
pub fn all_level_words(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if t > n {
        return out;
    }
    let mut word = vec![0usize; n];
    loop {
        let mut hit = vec![false; t];
        for &w in &word {
            hit[w] = true;
        }
        if hit.iter().all(|&b| b) {
            out.push(word.clone());
        }
        // odometer
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if word[pos] + 1 < t {
                word[pos] += 1;
                for w in word.iter_mut().skip(pos + 1) {
                    *w = 0;
                }
                break;
            }
        }
    }
}

fn i64_vec(v: &[Int]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("desk scale")).collect()
}

/// Sums reachable as bounded integer combinations of `vectors`, each
/// coefficient in [-bound, bound]. Dimension 1 runs on a boolean array, the
/// general case on a hash set.
pub enum Reachable {
    Line { offset: i64, hits: Vec<bool> },
    Grid(HashSet<Vec<i64>>),
}

impl Reachable {
    pub fn contains(&self, target: &[i64]) -> bool {
        match self {
            Reachable::Line { offset, hits } => {
                let idx = target[0] + offset;
                idx >= 0 && (idx as usize) < hits.len() && hits[idx as usize]
            }
            Reachable::Grid(set) => set.contains(target),
        }
    }
}

fn reachable_sums(vectors: &[Vec<i64>], dim: usize, bound: i64) -> Reachable {
    if dim == 1 {
        let reach: i64 = vectors.iter().map(|v| bound * v[0].abs()).sum();
        let offset = reach;
        let mut hits = vec![false; (2 * reach + 1) as usize];
        hits[offset as usize] = true;
        for v in vectors {
            if v[0] == 0 {
                continue;
            }
            let mut next = vec![false; hits.len()];
            for (i, &hit) in hits.iter().enumerate() {
                if !hit {
                    continue;
                }
                let base = i as i64 - offset;
                for c in -bound..=bound {
                    let s = base + c * v[0];
                    let idx = s + offset;
                    if idx >= 0 && (idx as usize) < next.len() {
                        next[idx as usize] = true;
                    }
                }
            }
            hits = next;
        }
        return Reachable::Line { offset, hits };
    }
    let mut set = HashSet::new();
    set.insert(vec![0i64; dim]);
    for v in vectors {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let mut next = HashSet::new();
        for base in &set {
            for c in -bound..=bound {
                let mut s = base.clone();
                for d in 0..dim {
                    s[d] += c * v[d];
                }
                next.insert(s);
            }
        }
        set = next;
    }
    Reachable::Grid(set)
}

/// Brute-force oracle for the classical columns condition with bounded
/// combination coefficients.
pub fn oracle_columns_condition(columns: &[Vec<i64>], combo_bound: i64) -> bool {
    let n = columns.len();
    let dim = columns.first().map_or(0, Vec::len);
    for t in 1..=n {
        for word in all_level_words(n, t) {
            let mut levels: Vec<Vec<usize>> = vec![Vec::new(); t];
            for (i, &s) in word.iter().enumerate() {
                levels[s].push(i);
            }
            let sum_of = |set: &[usize]| -> Vec<i64> {
                let mut acc = vec![0i64; dim];
                for &i in set {
                    for d in 0..dim {
                        acc[d] += columns[i][d];
                    }
                }
                acc
            };
            if sum_of(&levels[0]).iter().any(|&x| x != 0) {
                continue;
            }
            let mut earlier: Vec<Vec<i64>> = levels[0].iter().map(|&i| columns[i].clone()).collect();
            let mut ok = true;
            for level in &levels[1..] {
                let target = sum_of(level);
                let reach = reachable_sums(&earlier, dim, combo_bound);
                if !reach.contains(&target) {
                    ok = false;
                    break;
                }
                earlier.extend(level.iter().map(|&i| columns[i].clone()));
            }
            if ok {
                return true;
            }
        }
    }
    false
}

/// Brute-force oracle for the k-columns condition: every level partition,
/// every weight vector in [-delta_bound, delta_bound]^k, bounded combos.
/// Returns a witnessing (word, t, delta) for diagnostics.
pub fn oracle_k_columns(
    sys: &DkSystem,
    delta_bound: i64,
    combo_bound: i64,
) -> Option<(Vec<usize>, usize, Vec<i64>)> {
    let k = sys.group_count();
    let dim = sys.dim();
    let n = sys.total_vars();
    let flat = sys.flat_indices();
    let coeffs: Vec<Vec<i64>> = flat
        .iter()
        .map(|&(j, i)| i64_vec(sys.coeff(j, i)))
        .collect();
    for t in 1..=n {
        for word in all_level_words(n, t) {
            // Level sums A_{j,s}.
            let mut level_sums = vec![vec![vec![0i64; dim]; t]; k];
            for (pos, &(j, _)) in flat.iter().enumerate() {
                let s = word[pos];
                for d in 0..dim {
                    level_sums[j][s][d] += coeffs[pos][d];
                }
            }
            // Weight vectors surviving the first-level identity.
            let mut survivors: Vec<Vec<i64>> = Vec::new();
            let mut delta = vec![-delta_bound; k];
            'delta: loop {
                if delta.iter().any(|&x| x != 0) {
                    let ok = (0..dim).all(|d| {
                        let mut acc = 0i64;
                        for j in 0..k {
                            acc += delta[j] * level_sums[j][0][d];
                        }
                        acc == 0
                    });
                    if ok {
                        survivors.push(delta.clone());
                    }
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'delta;
                    }
                    pos -= 1;
                    if delta[pos] < delta_bound {
                        delta[pos] += 1;
                        for x in delta.iter_mut().skip(pos + 1) {
                            *x = -delta_bound;
                        }
                        break;
                    }
                }
            }
            if survivors.is_empty() {
                continue;
            }
            // Higher levels: reachable-set membership, one set per level.
            for s in 1..t {
                let mut earlier: Vec<Vec<i64>> = Vec::new();
                for s_prev in 0..s {
                    for (pos, &(_, _)) in flat.iter().enumerate() {
                        if word[pos] == s_prev {
                            earlier.push(coeffs[pos].clone());
                        }
                    }
                }
                let reach = reachable_sums(&earlier, dim, combo_bound);
                survivors.retain(|delta| {
                    let target: Vec<i64> = (0..dim)
                        .map(|d| {
                            (0..k).map(|j| delta[j] * level_sums[j][s][d]).sum::<i64>()
                        })
                        .collect();
                    reach.contains(&target)
                });
                if survivors.is_empty() {
                    break;
                }
            }
            if let Some(delta) = survivors.first() {
                return Some((word, t, delta.clone()));
            }
        }
    }
    None
}

/// Whether a *fixed* weight vector is valid for some level partition
/// (bounded combos); brute force, oracle-grade only.
pub fn oracle_delta_is_valid(sys: &DkSystem, delta: &[i64], combo_bound: i64) -> bool {
    let k = sys.group_count();
    let dim = sys.dim();
    let n = sys.total_vars();
    let flat = sys.flat_indices();
    let coeffs: Vec<Vec<i64>> = flat
        .iter()
        .map(|&(j, i)| i64_vec(sys.coeff(j, i)))
        .collect();
    for t in 1..=n {
        'word: for word in all_level_words(n, t) {
            let mut level_sums = vec![vec![vec![0i64; dim]; t]; k];
            for (pos, &(j, _)) in flat.iter().enumerate() {
                let s = word[pos];
                for d in 0..dim {
                    level_sums[j][s][d] += coeffs[pos][d];
                }
            }
            for d in 0..dim {
                let acc: i64 = (0..k).map(|j| delta[j] * level_sums[j][0][d]).sum();
                if acc != 0 {
                    continue 'word;
                }
            }
            let mut ok = true;
            for s in 1..t {
                let mut earlier: Vec<Vec<i64>> = Vec::new();
                for s_prev in 0..s {
                    for (pos, _) in flat.iter().enumerate() {
                        if word[pos] == s_prev {
                            earlier.push(coeffs[pos].clone());
                        }
                    }
                }
                let reach = reachable_sums(&earlier, dim, combo_bound);
                let target: Vec<i64> = (0..dim)
                    .map(|d| (0..k).map(|j| delta[j] * level_sums[j][s][d]).sum::<i64>())
                    .collect();
                if !reach.contains(&target) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return true;
            }
        }
    }
    false
}

/// Textbook cofactor determinant, independent of the library's
/// determinant code.
pub fn naive_det(m: &IntMatrix) -> Int {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return Int::one();
    }
    if n == 1 {
        return m.at(0, 0).clone();
    }
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
        let term = m.at(0, c) * naive_det(&sub);
        if c % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Hermite shape check: echelon, positive pivots, entries above each pivot
/// in [0, pivot).
pub fn is_hermite_shape(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for r in 0..h.rows() {
        let pivot = (0..h.cols()).find(|&c| !h.at(r, c).is_zero());
        match pivot {
            None => seen_zero_row = true,
            Some(pc) => {
                if seen_zero_row {
                    return false; // nonzero row after a zero row
                }
                if let Some(prev) = last_pivot {
                    if pc <= prev {
                        return false;
                    }
                }
                if h.at(r, pc).is_negative() {
                    return false;
                }
                let p = h.at(r, pc);
                for i in 0..r {
                    if h.at(i, pc).is_negative() || h.at(i, pc) >= p {
                        return false;
                    }
                }
                last_pivot = Some(pc);
            }
        }
    }
    true
}

/// Exhaustive brute-force search for a semi-monochromatic solution,
/// independent of the library's searcher. Only usable at tiny scales.
pub fn brute_force_semi_mono(
    sys: &DkSystem,
    color_of: &dyn Fn(i64) -> u64,
    window: i64,
) -> Option<Vec<i64>> {
    let n = sys.total_vars();
    let flat = sys.flat_indices();
    let coeffs: Vec<Vec<i64>> = flat
        .iter()
        .map(|&(j, i)| i64_vec(sys.coeff(j, i)))
        .collect();
    let dim = sys.dim();
    let mut values = vec![-window; n];
    loop {
        let nontrivial = values.iter().any(|&z| z != 0);
        if nontrivial {
            let solves = (0..dim).all(|d| {
                (0..n).map(|p| coeffs[p][d] * values[p]).sum::<i64>() == 0
            });
            if solves {
                let mut mono = true;
                for j in 0..sys.group_count() {
                    let mut group_color = None;
                    for (pos, &(jj, _)) in flat.iter().enumerate() {
                        if jj != j {
                            continue;
                        }
                        let c = color_of(values[pos]);
                        match group_color {
                            None => group_color = Some(c),
                            Some(g) if g != c => {
                                mono = false;
                                break;
                            }
                            _ => {}
                        }
                    }
                    if !mono {
                        break;
                    }
                }
                if mono {
                    return Some(values);
                }
            }
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if values[pos] < window {
                values[pos] += 1;
                for v in values.iter_mut().skip(pos + 1) {
                    *v = -window;
                }
                break;
            }
        }
    }
}

/// smod-p of an i64, written independently of the library.
pub fn smod_i64_oracle(z: i64, p: i64) -> u64 {
    if z == 0 {
        return 0;
    }
    let mut v = z;
    while v % p == 0 {
        v /= p;
    }
    v.rem_euclid(p) as u64
}
