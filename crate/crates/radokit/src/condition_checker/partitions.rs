//! Enumeration of level assignments.
//!
//! A level word assigns one of t levels to each of n variable positions;
//! a word is admissible when every level is hit at least once (globally
//! empty levels are forbidden; per-group emptiness is allowed). Words are
//! visited in lexicographic order, so runs are reproducible and small
//! certificates are found first.

/// Result of walking the level words for one value of t.
pub(crate) enum WalkResult<T> {
    /// The visitor stopped the walk with a value.
    Found(T),
    /// The node budget ran out before the walk completed.
    Exhausted,
    /// Every admissible word was visited.
    Complete,
}

/// Visit every surjective word in [0, t)^n in lexicographic order. Each tree
/// node costs one unit of `budget`. The visitor may return `Some` to stop.
pub(crate) fn walk_level_words<T>(
    n: usize,
    t: usize,
    budget: &mut u64,
    visit: &mut impl FnMut(&[usize]) -> Option<T>,
) -> WalkResult<T> {
    if t > n {
        return WalkResult::Complete;
    }
    let mut word = vec![0usize; n];
    let mut level_counts = vec![0usize; t];
    rec(&mut word, 0, &mut level_counts, 0, n, t, budget, visit)
}

#[allow(clippy::too_many_arguments)]
fn rec<T>(
    word: &mut Vec<usize>,
    pos: usize,
    level_counts: &mut Vec<usize>,
    used: usize,
    n: usize,
    t: usize,
    budget: &mut u64,
    visit: &mut impl FnMut(&[usize]) -> Option<T>,
) -> WalkResult<T> {
    if *budget == 0 {
        return WalkResult::Exhausted;
    }
    *budget -= 1;
    if pos == n {
        debug_assert_eq!(used, t);
        if let Some(v) = visit(word) {
            return WalkResult::Found(v);
        }
        return WalkResult::Complete;
    }
    // Remaining positions must still be able to hit every unused level.
    let missing = t - used;
    if n - pos < missing {
        return WalkResult::Complete;
    }
    let forced = n - pos == missing;
    for level in 0..t {
        let first_touch = level_counts[level] == 0;
        if forced && !first_touch {
            continue;
        }
        word[pos] = level;
        level_counts[level] += 1;
        let next_used = if first_touch { used + 1 } else { used };
        match rec(word, pos + 1, level_counts, next_used, n, t, budget, visit) {
            WalkResult::Complete => {}
            stop => {
                level_counts[level] -= 1;
                return stop;
            }
        }
        level_counts[level] -= 1;
    }
    WalkResult::Complete
}
