//! Bounded-window search for semi-monochromatic solutions, per-prime
//! falsification reports, and toy-scale semi-Rado numbers.
//!
//! The searcher is exhaustive over assignments with |z| <= R: per group a
//! color class is chosen first (semi-monochromaticity bounds the value set),
//! then values are enumerated ascending by absolute value with positives
//! first, with per-coordinate partial-sum pruning against the attainable
//! range of the remaining terms. The final variable is solved by
//! back-substitution when its coefficient vector permits. All negative
//! results are window-relative only.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::colorings::{ColorId, ColoringRef, TableColoring};
use crate::error::Error;
use crate::exact_linalg::Int;
use crate::system_model::{is_semi_monochromatic, Assignment, DkSystem};

/// Outcome of one bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found {
        assignment: Assignment,
        colors: Vec<ColorId>,
    },
    /// Exhaustive for the window; says nothing about larger windows.
    NotFound { window: i64, coloring: String },
    BudgetExhausted,
}

impl SearchResult {
    pub fn found(&self) -> Option<(&Assignment, &[ColorId])> {
        match self {
            SearchResult::Found { assignment, colors } => Some((assignment, colors)),
            _ => None,
        }
    }
}

/// Largest coefficient / window magnitude the i128 accumulators accept.
const MAX_SEARCH_MAGNITUDE: i64 = 1 << 31;

struct SearchContext<'a> {
    sys: &'a DkSystem,
    coeffs: Vec<Vec<Vec<i128>>>, // [j][i][d]
    dim: usize,
    window: i64,
    /// Value lists per color class, sorted by (|z|, sign), classes ascending
    /// by color id.
    classes: Vec<(ColorId, Vec<i64>)>,
    /// Per coordinate, sum over all variables of groups > j of |a| * R.
    future_bound: Vec<Vec<i128>>, // [j][d]
    budget: Option<u64>,
    nodes: u64,
    /// Witnesses collected so far, in discovery order.
    found: Vec<(Vec<Vec<i64>>, Vec<ColorId>)>,
    /// Stop after this many witnesses.
    max_found: usize,
}

struct GroupState {
    color: ColorId,
    /// Suffix attainable intervals for the current group under its class.
    suffix: Vec<(Vec<i128>, Vec<i128>)>,
}

enum Walk {
    /// Enough witnesses were collected.
    Stop,
    Exhausted,
    Done,
}

/// Exhaustive bounded search for a nontrivial semi-monochromatic solution
/// with all values in [-window, window]. The first witness in the
/// deterministic traversal order is returned.
pub fn find_semi_mono_solution(
    sys: &DkSystem,
    coloring: &ColoringRef,
    window: i64,
    budget: Option<u64>,
) -> Result<SearchResult, Error> {
    let (mut witnesses, end) = run_search(sys, coloring, window, budget, 1)?;
    if let Some((assignment, colors)) = witnesses.pop() {
        debug_assert_eq!(is_semi_monochromatic(sys, &assignment, coloring), Ok(true));
        return Ok(SearchResult::Found { assignment, colors });
    }
    Ok(match end {
        Walk::Exhausted => SearchResult::BudgetExhausted,
        _ => SearchResult::NotFound {
            window,
            coloring: coloring.describe(),
        },
    })
}

/// Collect up to `max` witnesses in deterministic traversal order. The
/// boolean is true when the budget ran out before the walk completed (the
/// returned list is still valid, just possibly shorter than exhaustive).
pub fn find_semi_mono_witnesses(
    sys: &DkSystem,
    coloring: &ColoringRef,
    window: i64,
    budget: Option<u64>,
    max: usize,
) -> Result<(Vec<(Assignment, Vec<ColorId>)>, bool), Error> {
    let (witnesses, end) = run_search(sys, coloring, window, budget, max)?;
    Ok((witnesses, matches!(end, Walk::Exhausted)))
}

fn run_search(
    sys: &DkSystem,
    coloring: &ColoringRef,
    window: i64,
    budget: Option<u64>,
    max_found: usize,
) -> Result<(Vec<(Assignment, Vec<ColorId>)>, Walk), Error> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    if window < 0 {
        return Err(Error::Input("window must be nonnegative".into()));
    }
    if window > MAX_SEARCH_MAGNITUDE {
        return Err(Error::MagnitudeTooLarge(format!("window {window}")));
    }
    if !coloring.covers_window(window) {
        let (lo, hi) = match coloring {
            ColoringRef::Table(t) => t.window(),
            ColoringRef::Smod { .. } => unreachable!("smod is total"),
        };
        return Err(Error::ColoringNotTotal {
            needed: window,
            lo,
            hi,
        });
    }
    let mut coeffs: Vec<Vec<Vec<i128>>> = Vec::with_capacity(sys.group_count());
    for j in 0..sys.group_count() {
        let mut block = Vec::with_capacity(sys.group_size(j));
        for i in 0..sys.group_size(j) {
            let mut v = Vec::with_capacity(sys.dim());
            for x in sys.coeff(j, i) {
                let x = x
                    .to_i64()
                    .filter(|x| x.abs() <= MAX_SEARCH_MAGNITUDE)
                    .ok_or_else(|| Error::MagnitudeTooLarge(format!("coefficient {x}")))?;
                v.push(x as i128);
            }
            block.push(v);
        }
        coeffs.push(block);
    }
    // Color classes present in the window.
    let mut classes: Vec<(ColorId, Vec<i64>)> = Vec::new();
    for z in -window..=window {
        let c = coloring.color(z)?;
        match classes.iter_mut().find(|(id, _)| *id == c) {
            Some((_, list)) => list.push(z),
            None => classes.push((c, vec![z])),
        }
    }
    classes.sort_by_key(|(id, _)| *id);
    for (_, list) in &mut classes {
        list.sort_by_key(|&z| (z.abs(), z < 0));
    }
    let dim = sys.dim();
    let r = window as i128;
    let mut future_bound = vec![vec![0i128; dim]; sys.group_count()];
    for j in (0..sys.group_count()).rev() {
        let mut bound = if j + 1 < sys.group_count() {
            future_bound[j + 1].clone()
        } else {
            vec![0i128; dim]
        };
        if j + 1 < sys.group_count() {
            for i in 0..coeffs[j + 1].len() {
                for d in 0..dim {
                    bound[d] += coeffs[j + 1][i][d].abs() * r;
                }
            }
        }
        future_bound[j] = bound;
    }
    let mut ctx = SearchContext {
        sys,
        coeffs,
        dim,
        window,
        classes,
        future_bound,
        budget,
        nodes: 0,
        found: Vec::new(),
        max_found: max_found.max(1),
    };
    let mut values: Vec<Vec<i64>> = sys.group_sizes().iter().map(|&n| vec![0; n]).collect();
    let mut colors: Vec<ColorId> = Vec::new();
    let mut sum = vec![0i128; dim];
    let end = search_group(&mut ctx, 0, &mut values, &mut colors, &mut sum, false);
    let witnesses = ctx
        .found
        .into_iter()
        .map(|(values, colors)| {
            let assignment = Assignment::new(
                values
                    .into_iter()
                    .map(|g| g.into_iter().map(Int::from).collect())
                    .collect(),
            );
            (assignment, colors)
        })
        .collect();
    Ok((witnesses, end))
}

fn search_group(
    ctx: &mut SearchContext,
    j: usize,
    values: &mut Vec<Vec<i64>>,
    colors: &mut Vec<ColorId>,
    sum: &mut Vec<i128>,
    any_nonzero: bool,
) -> Walk {
    if j == ctx.sys.group_count() {
        debug_assert!(sum.iter().all(|&s| s == 0));
        if !any_nonzero {
            return Walk::Done;
        }
        ctx.found.push((values.clone(), colors.clone()));
        if ctx.found.len() >= ctx.max_found {
            return Walk::Stop;
        }
        return Walk::Done;
    }
    for ci in 0..ctx.classes.len() {
        let (color, class_values) = ctx.classes[ci].clone();
        if class_values.is_empty() {
            continue;
        }
        let value_lo = *class_values.iter().min().unwrap() as i128;
        let value_hi = *class_values.iter().max().unwrap() as i128;
        // Suffix attainable intervals for this group's variables.
        let n = ctx.coeffs[j].len();
        let mut suffix = vec![(vec![0i128; ctx.dim], vec![0i128; ctx.dim]); n + 1];
        for i in (0..n).rev() {
            let (mut lo, mut hi) = suffix[i + 1].clone();
            for d in 0..ctx.dim {
                let a = ctx.coeffs[j][i][d];
                let (x, y) = (a * value_lo, a * value_hi);
                lo[d] += x.min(y);
                hi[d] += x.max(y);
            }
            suffix[i] = (lo, hi);
        }
        let state = GroupState { color, suffix };
        colors.push(color);
        match search_var(ctx, j, 0, &class_values, &state, values, colors, sum, any_nonzero) {
            Walk::Done => {}
            stop => {
                colors.pop();
                return stop;
            }
        }
        colors.pop();
    }
    Walk::Done
}

#[allow(clippy::too_many_arguments)]
fn search_var(
    ctx: &mut SearchContext,
    j: usize,
    i: usize,
    class_values: &[i64],
    state: &GroupState,
    values: &mut Vec<Vec<i64>>,
    colors: &mut Vec<ColorId>,
    sum: &mut Vec<i128>,
    any_nonzero: bool,
) -> Walk {
    let n = ctx.coeffs[j].len();
    if i == n {
        return search_group(ctx, j + 1, values, colors, sum, any_nonzero);
    }
    let is_last_var = j + 1 == ctx.sys.group_count() && i + 1 == n;
    if is_last_var {
        if let Some(walk) =
            solve_last_var(ctx, j, i, state, values, colors, sum, any_nonzero)
        {
            return walk;
        }
        // No unique back-substitution: fall through to enumeration.
    }
    for &z in class_values {
        if let Some(limit) = ctx.budget {
            if ctx.nodes >= limit {
                return Walk::Exhausted;
            }
        }
        ctx.nodes += 1;
        let zz = z as i128;
        for d in 0..ctx.dim {
            sum[d] += ctx.coeffs[j][i][d] * zz;
        }
        // Prune: each coordinate must still be able to reach 0.
        let (rest_lo, rest_hi) = &state.suffix[i + 1];
        let feasible = (0..ctx.dim).all(|d| {
            let lo = sum[d] + rest_lo[d] - ctx.future_bound[j][d];
            let hi = sum[d] + rest_hi[d] + ctx.future_bound[j][d];
            lo <= 0 && 0 <= hi
        });
        if feasible {
            values[j][i] = z;
            match search_var(
                ctx,
                j,
                i + 1,
                class_values,
                state,
                values,
                colors,
                sum,
                any_nonzero || z != 0,
            ) {
                Walk::Done => {}
                stop => return stop,
            }
        }
        for d in 0..ctx.dim {
            sum[d] -= ctx.coeffs[j][i][d] * zz;
        }
    }
    Walk::Done
}

/// Unique back-substitution for the final variable: D equations in one
/// unknown. Returns `None` when the coefficient vector is zero (the caller
/// enumerates instead).
#[allow(clippy::too_many_arguments)]
fn solve_last_var(
    ctx: &mut SearchContext,
    j: usize,
    i: usize,
    state: &GroupState,
    values: &mut Vec<Vec<i64>>,
    colors: &mut Vec<ColorId>,
    sum: &mut Vec<i128>,
    any_nonzero: bool,
) -> Option<Walk> {
    let coeff = &ctx.coeffs[j][i];
    let d0 = (0..ctx.dim).find(|&d| coeff[d] != 0)?;
    if let Some(limit) = ctx.budget {
        if ctx.nodes >= limit {
            return Some(Walk::Exhausted);
        }
    }
    ctx.nodes += 1;
    if sum[d0] % coeff[d0] != 0 {
        return Some(Walk::Done);
    }
    let z = -sum[d0] / coeff[d0];
    if z.abs() > ctx.window as i128 {
        return Some(Walk::Done);
    }
    for d in 0..ctx.dim {
        if sum[d] + coeff[d] * z != 0 {
            return Some(Walk::Done);
        }
    }
    let z64 = z as i64;
    // The solved value must carry the group's color.
    if !class_contains(ctx, state.color, z64) {
        return Some(Walk::Done);
    }
    if !any_nonzero && z == 0 {
        return Some(Walk::Done);
    }
    values[j][i] = z64;
    ctx.found.push((values.clone(), colors.clone()));
    if ctx.found.len() >= ctx.max_found {
        return Some(Walk::Stop);
    }
    Some(Walk::Done)
}

fn class_contains(ctx: &SearchContext, color: ColorId, z: i64) -> bool {
    ctx.classes
        .iter()
        .find(|(id, _)| *id == color)
        .map(|(_, list)| list.contains(&z))
        .unwrap_or(false)
}

/// Per-prime falsification report: for each prime, the bounded search under
/// the smod-p coloring. Primes with no witness inside the window are
/// refutation evidence, explicitly window-bounded.
#[derive(Debug, Clone)]
pub struct FalsifyReport {
    pub window: i64,
    pub entries: Vec<FalsifyEntry>,
}

#[derive(Debug, Clone)]
pub struct FalsifyEntry {
    pub prime: u64,
    pub result: SearchResult,
}

impl FalsifyReport {
    /// Primes with no witness inside the window.
    pub fn unsolved_primes(&self) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|e| matches!(e.result, SearchResult::NotFound { .. }))
            .map(|e| e.prime)
            .collect()
    }
}

pub fn falsify_semi_regularity(
    sys: &DkSystem,
    primes: &[u64],
    window: i64,
    budget: Option<u64>,
) -> Result<FalsifyReport, Error> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    let entries: Result<Vec<FalsifyEntry>, Error> = primes
        .par_iter()
        .map(|&p| {
            let coloring = ColoringRef::smod(p)?;
            let result = find_semi_mono_solution(sys, &coloring, window, budget)?;
            Ok(FalsifyEntry { prime: p, result })
        })
        .collect();
    Ok(FalsifyReport {
        window,
        entries: entries?,
    })
}

/// Cap on the (upper bound of the) number of colorings `semi_rado_number`
/// may enumerate per window before declaring the scale infeasible.
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

/// Smallest window radius R <= max_window such that every r-coloring of
/// [-R, R] admits a nontrivial semi-monochromatic solution inside the
/// window, or `None` if no such radius exists up to the bound. Colorings are
/// enumerated canonically up to color renaming.
pub fn semi_rado_number(
    sys: &DkSystem,
    colors: u32,
    max_window: i64,
    cap: u64,
) -> Result<Option<i64>, Error> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem);
    }
    if colors == 0 {
        return Err(Error::Input("color count must be >= 1".into()));
    }
    for window in 1..=max_window {
        let positions = 2 * window as u32 + 1;
        let raw_count = Int::from(colors).pow(positions);
        if raw_count > Int::from(cap) {
            return Err(Error::InfeasibleScale {
                colorings: raw_count.to_string(),
                cap,
            });
        }
        if every_coloring_admits_solution(sys, colors, window)? {
            return Ok(Some(window));
        }
    }
    Ok(None)
}

fn every_coloring_admits_solution(
    sys: &DkSystem,
    colors: u32,
    window: i64,
) -> Result<bool, Error> {
    let len = (2 * window + 1) as usize;
    // Restricted-growth words enumerate colorings up to color renaming.
    let mut word = vec![0u32; len];
    loop {
        let table = TableColoring::new(
            -window,
            window,
            word.iter().map(|&c| c as ColorId).collect(),
        )
        .expect("well-formed window");
        let coloring = ColoringRef::table(table);
        match find_semi_mono_solution(sys, &coloring, window, None)? {
            SearchResult::Found { .. } => {}
            _ => return Ok(false),
        }
        if !next_restricted_growth(&mut word, colors) {
            return Ok(true);
        }
    }
}

/// Advance a restricted-growth word with at most `max_colors` colors.
/// Position 0 is pinned to color 0; position i may use colors up to
/// min(max(word[..i]) + 1, max_colors - 1).
fn next_restricted_growth(word: &mut [u32], max_colors: u32) -> bool {
    let len = word.len();
    let mut prefix_max = vec![0u32; len];
    let mut running = 0;
    for i in 1..len {
        running = running.max(word[i - 1]);
        prefix_max[i] = running;
    }
    for i in (1..len).rev() {
        let limit = (prefix_max[i] + 1).min(max_colors - 1);
        if word[i] < limit {
            word[i] += 1;
            for w in word.iter_mut().skip(i + 1) {
                *w = 0;
            }
            return true;
        }
    }
    false
}
