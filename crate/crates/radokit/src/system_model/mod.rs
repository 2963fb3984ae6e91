//! The k-partite linear system data model: coefficient blocks, assignments,
//! the semi-monochromatic solution predicate, and the weight-scaled
//! single-block reduction.

mod json;

pub use json::{
    parse_coloring, parse_system, serialize_coloring, serialize_system, solution_to_json,
};
pub(crate) use json::int_to_json;

use num_traits::Zero;

use crate::colorings::{ColorId, ColoringRef};
use crate::error::Error;
use crate::exact_linalg::{Int, IntMatrix, IntVector};

/// A D-dimensional k-partite linear system: for each group j a list of
/// coefficient vectors a_{j,i} in Z^D, one per variable x_{j,i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkSystem {
    dim: usize,
    blocks: Vec<Vec<IntVector>>,
}

impl DkSystem {
    pub fn new(dim: usize, blocks: Vec<Vec<IntVector>>) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::ShapeMismatch("d must be >= 1".into()));
        }
        if blocks.is_empty() {
            return Err(Error::ShapeMismatch("k must be >= 1".into()));
        }
        for (j, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::ShapeMismatch(format!("block {} is empty", j + 1)));
            }
            for (i, v) in block.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::ShapeMismatch(format!(
                        "blocks[{}][{}] has length {}, expected d = {}",
                        j,
                        i,
                        v.len(),
                        dim
                    )));
                }
            }
        }
        Ok(DkSystem { dim, blocks })
    }

    pub fn from_i64(dim: usize, blocks: &[&[&[i64]]]) -> Self {
        DkSystem::new(
            dim,
            blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|v| v.iter().map(|&x| Int::from(x)).collect())
                        .collect()
                })
                .collect(),
        )
        .expect("well-shaped literal")
    }

    /// The dimension D.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The number of variable groups k.
    pub fn group_count(&self) -> usize {
        self.blocks.len()
    }

    /// N_j for each group.
    pub fn group_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn group_size(&self, j: usize) -> usize {
        self.blocks[j].len()
    }

    /// Coefficient vector a_{j,i} (0-based).
    pub fn coeff(&self, j: usize, i: usize) -> &IntVector {
        &self.blocks[j][i]
    }

    pub fn total_vars(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// All coefficient vectors are zero: every assignment solves the system
    /// and regularity questions are vacuous. Solvers refuse such systems.
    pub fn is_degenerate(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|v| v.iter().all(Zero::is_zero)))
    }

    /// Flat (group, index) pairs in scan order.
    pub fn flat_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.total_vars());
        for (j, block) in self.blocks.iter().enumerate() {
            for i in 0..block.len() {
                out.push((j, i));
            }
        }
        out
    }

    /// The D x n matrix whose columns are all coefficient vectors in flat
    /// scan order.
    pub fn column_matrix(&self) -> IntMatrix {
        let cols: Vec<IntVector> = self
            .flat_indices()
            .into_iter()
            .map(|(j, i)| self.coeff(j, i).clone())
            .collect();
        let mut m = IntMatrix::zero(self.dim, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for r in 0..self.dim {
                *m.at_mut(r, c) = col[r].clone();
            }
        }
        m
    }

    /// Sum of the coefficient vectors of group `j` over the index set `set`.
    pub fn coeff_sum(&self, j: usize, set: &[usize]) -> IntVector {
        let mut s = vec![Int::zero(); self.dim];
        for &i in set {
            for d in 0..self.dim {
                s[d] += &self.blocks[j][i][d];
            }
        }
        s
    }
}

/// An integer value for every variable of a system, in the same block shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Vec<Int>>,
}

impl Assignment {
    pub fn new(values: Vec<Vec<Int>>) -> Self {
        Assignment { values }
    }

    pub fn from_i64(values: &[&[i64]]) -> Self {
        Assignment {
            values: values
                .iter()
                .map(|g| g.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        }
    }

    pub fn get(&self, j: usize, i: usize) -> &Int {
        &self.values[j][i]
    }

    pub fn groups(&self) -> &[Vec<Int>] {
        &self.values
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|g| g.iter().all(Zero::is_zero))
    }

    pub fn matches_shape(&self, s: &DkSystem) -> bool {
        self.values.len() == s.group_count()
            && self
                .values
                .iter()
                .zip(&s.blocks)
                .all(|(g, b)| g.len() == b.len())
    }
}

/// Exact value of sum_j sum_i a_{j,i} z_{j,i}.
pub fn evaluate(s: &DkSystem, a: &Assignment) -> Result<IntVector, Error> {
    if !a.matches_shape(s) {
        return Err(Error::ShapeMismatch(
            "assignment shape differs from system".into(),
        ));
    }
    let mut out = vec![Int::zero(); s.dim()];
    for (j, block) in s.blocks.iter().enumerate() {
        for (i, coeff) in block.iter().enumerate() {
            let z = a.get(j, i);
            if z.is_zero() {
                continue;
            }
            for d in 0..s.dim() {
                out[d] += &coeff[d] * z;
            }
        }
    }
    Ok(out)
}

/// True iff `a` solves the system exactly, is not all zero, and every
/// group's value set is monochromatic under the coloring.
pub fn is_semi_monochromatic(
    s: &DkSystem,
    a: &Assignment,
    coloring: &ColoringRef,
) -> Result<bool, Error> {
    let value = evaluate(s, a)?;
    if value.iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    if a.is_all_zero() {
        return Ok(false);
    }
    for group in a.groups() {
        let mut first: Option<ColorId> = None;
        for z in group {
            let c = coloring.color_big(z)?;
            match first {
                None => first = Some(c),
                Some(f) if f != c => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// Colors of each group of an exact semi-monochromatic assignment.
pub fn group_colors(a: &Assignment, coloring: &ColoringRef) -> Result<Vec<ColorId>, Error> {
    let mut out = Vec::with_capacity(a.groups().len());
    for group in a.groups() {
        out.push(coloring.color_big(&group[0])?);
    }
    Ok(out)
}

/// Single-block system obtained by scaling group j's coefficients by the
/// weight delta_j and dropping zero-weight groups, with a back-map so that
/// solutions lift via x_{j,i} = delta_j * x'_{j,i} (dropped groups take 0).
#[derive(Debug, Clone)]
pub struct ScaledSystem {
    pub system: DkSystem,
    /// (j, i) source of each scaled column, in order.
    pub back_map: Vec<(usize, usize)>,
}

pub fn scaled_system(s: &DkSystem, delta: &[Int]) -> Result<ScaledSystem, Error> {
    if delta.len() != s.group_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} groups",
            delta.len(),
            s.group_count()
        )));
    }
    if delta.iter().all(Zero::is_zero) {
        return Err(Error::ZeroWeights);
    }
    let mut cols: Vec<IntVector> = Vec::new();
    let mut back_map = Vec::new();
    for (j, block) in s.blocks.iter().enumerate() {
        if delta[j].is_zero() {
            continue;
        }
        for (i, coeff) in block.iter().enumerate() {
            cols.push(coeff.iter().map(|x| x * &delta[j]).collect());
            back_map.push((j, i));
        }
    }
    let system = DkSystem::new(s.dim(), vec![cols])?;
    Ok(ScaledSystem { system, back_map })
}
