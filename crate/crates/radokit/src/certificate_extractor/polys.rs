//! Linear polynomials extracted from a level structure.
//!
//! Level 1 contributes one affine form per coordinate. Each higher level s
//! contributes the maximal minors of the matrix whose first row is the
//! symbolic combination A_{1,s} + z_2 A_{2,s} + ... + z_k A_{k,s} and whose
//! other rows are a basis of the earlier vectors' span; cofactor expansion
//! along the first row turns each minor into an affine form in z.

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::error::Error;
use crate::exact_linalg::{
    combinations, determinant, in_rational_span, integer_inconsistency_witness,
    solve_rational_system, Int, IntMatrix, IntVector, RatMatrix, RatVector, Rational,
};
use crate::system_model::DkSystem;

/// An affine form c0 + sum_{j >= 2} c_j z_j with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Int,
    /// Coefficients of z_2, ..., z_k (length k - 1).
    pub coeffs: Vec<Int>,
}

impl LinearForm {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn evaluate(&self, z: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(self.constant.clone());
        for (c, zj) in self.coeffs.iter().zip(z) {
            acc += Rational::from_integer(c.clone()) * zj;
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert(
            "constant".into(),
            crate::system_model::int_to_json(&self.constant),
        );
        obj.insert(
            "coeffs".into(),
            Value::Array(
                self.coeffs
                    .iter()
                    .map(crate::system_model::int_to_json)
                    .collect(),
            ),
        );
        Value::Object(obj)
    }
}

/// Where a form came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormProvenance {
    /// Coordinate d of the level-1 combination.
    LevelOne { coord: usize },
    /// A maximal minor of the level-s matrix, by chosen columns (0-based).
    Minor { level: usize, cols: Vec<usize> },
    /// An entirely-zero group j (0-based): its variable is pinned to 0.
    ZeroGroup { group: usize },
}

impl FormProvenance {
    pub fn describe(&self) -> String {
        match self {
            FormProvenance::LevelOne { coord } => format!("level1[d={}]", coord + 1),
            FormProvenance::Minor { level, cols } => {
                let cols: Vec<String> = cols.iter().map(|c| (c + 1).to_string()).collect();
                format!("minor[s={},cols={}]", level + 1, cols.join(","))
            }
            FormProvenance::ZeroGroup { group } => format!("zerogroup[j={}]", group + 1),
        }
    }
}

/// A deduplicated collection of forms with provenance; zero forms and exact
/// duplicates are recorded but not kept.
#[derive(Debug, Clone, Default)]
pub struct PolynomialSystem {
    pub forms: Vec<LinearForm>,
    pub provenance: Vec<FormProvenance>,
    pub dropped_zero: Vec<FormProvenance>,
    pub dropped_duplicates: Vec<FormProvenance>,
}

impl PolynomialSystem {
    pub fn push(&mut self, form: LinearForm, provenance: FormProvenance) {
        if form.is_zero() {
            self.dropped_zero.push(provenance);
            return;
        }
        if self.forms.contains(&form) {
            self.dropped_duplicates.push(provenance);
            return;
        }
        self.forms.push(form);
        self.provenance.push(provenance);
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

fn coeff_sum_over(sys: &DkSystem, sets: &[Vec<Vec<usize>>], j: usize, s: usize) -> IntVector {
    sys.coeff_sum(j, &sets[j][s])
}

/// Earlier coefficient vectors in (level, group, index) order.
fn earlier_vectors_over(sys: &DkSystem, sets: &[Vec<Vec<usize>>], s: usize) -> Vec<IntVector> {
    let mut out = Vec::new();
    for earlier in 0..s {
        for (j, group) in sets.iter().enumerate() {
            for &i in &group[earlier] {
                out.push(sys.coeff(j, i).clone());
            }
        }
    }
    out
}

/// Greedy maximal Q-linearly independent subset, scanning in the list's
/// order and keeping vectors that increase the rank.
fn greedy_basis(vectors: &[IntVector]) -> Vec<IntVector> {
    let mut basis: Vec<IntVector> = Vec::new();
    let mut basis_rat: Vec<RatVector> = Vec::new();
    for v in vectors {
        let v_rat: RatVector = v
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect();
        if in_rational_span(&basis_rat, &v_rat).is_none() {
            basis.push(v.clone());
            basis_rat.push(v_rat);
        }
    }
    basis
}

/// Build the polynomial system of a level structure. The pivot group must
/// already sit at position 0; the variables z_2, .., z_k correspond to the
/// remaining groups in order. `finite_sets[j][s]` lists group j's indices at
/// level s; levels listed here are exactly the ones polynomials are drawn
/// from.
pub fn build_polynomial_system(sys: &DkSystem, finite_sets: &[Vec<Vec<usize>>]) -> PolynomialSystem {
    let k = sys.group_count();
    let dim = sys.dim();
    let t = finite_sets.first().map_or(0, Vec::len);
    let mut out = PolynomialSystem::default();
    if t == 0 {
        return out;
    }
    // Level-1 forms: one per coordinate.
    let level1_sums: Vec<IntVector> = (0..k)
        .map(|j| coeff_sum_over(sys, finite_sets, j, 0))
        .collect();
    for d in 0..dim {
        let form = LinearForm {
            constant: level1_sums[0][d].clone(),
            coeffs: (1..k).map(|j| level1_sums[j][d].clone()).collect(),
        };
        out.push(form, FormProvenance::LevelOne { coord: d });
    }
    // Minor forms for each higher level.
    for s in 1..t {
        let earlier = earlier_vectors_over(sys, finite_sets, s);
        let basis = greedy_basis(&earlier);
        if basis.len() == dim {
            continue; // the earlier vectors span everything
        }
        let rows = basis.len() + 1;
        let sums: Vec<IntVector> = (0..k)
            .map(|j| coeff_sum_over(sys, finite_sets, j, s))
            .collect();
        for cols in combinations(dim, rows) {
            let det_with = |first_row: &IntVector| -> Int {
                let mut m = IntMatrix::zero(rows, rows);
                for (cc, &c) in cols.iter().enumerate() {
                    *m.at_mut(0, cc) = first_row[c].clone();
                }
                for (r, b) in basis.iter().enumerate() {
                    for (cc, &c) in cols.iter().enumerate() {
                        *m.at_mut(r + 1, cc) = b[c].clone();
                    }
                }
                determinant(&m)
            };
            let form = LinearForm {
                constant: det_with(&sums[0]),
                coeffs: (1..k).map(|j| det_with(&sums[j])).collect(),
            };
            out.push(form, FormProvenance::Minor { level: s, cols });
        }
    }
    out
}

/// Outcome of solving a polynomial system over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootOutcome {
    /// The deterministic common root with free variables pinned to 0.
    Root(Vec<Rational>),
    /// No rational root; integer multipliers y with sum y_i f_i = c != 0.
    Inconsistent { obstruction: Int, multipliers: Vec<Int> },
}

/// Solve {f = 0 : f in G} exactly over Q. When inconsistent, return the
/// nonzero constant obtained by integer elimination: any prime admitting a
/// mod-p common root of G must divide it.
pub fn common_rational_root(g: &PolynomialSystem) -> Result<RootOutcome, Error> {
    if g.forms.is_empty() {
        return Err(Error::EmptyPolynomialSystem);
    }
    let vars = g.forms[0].coeffs.len();
    debug_assert!(g.forms.iter().all(|f| f.coeffs.len() == vars));
    let m = g.forms.len();
    let mut a_int = IntMatrix::zero(m, vars);
    let mut b_int: Vec<Int> = Vec::with_capacity(m);
    for (r, f) in g.forms.iter().enumerate() {
        for (c, coeff) in f.coeffs.iter().enumerate() {
            *a_int.at_mut(r, c) = coeff.clone();
        }
        b_int.push(-f.constant.clone());
    }
    let a_rat = RatMatrix::from_rows(
        g.forms
            .iter()
            .map(|f| {
                f.coeffs
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect()
            })
            .collect(),
    );
    let b_rat: Vec<Rational> = b_int
        .iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect();
    match solve_rational_system(&a_rat, &b_rat) {
        Some(root) => {
            debug_assert!(g.forms.iter().all(|f| f.evaluate(&root).is_zero()));
            Ok(RootOutcome::Root(root))
        }
        None => {
            let (y, r) = integer_inconsistency_witness(&a_int, &b_int)
                .expect("inconsistent over Q must yield a witness");
            // c = sum y_i f_i = y . c0 = -(y . b) = -r.
            let mut c = Int::zero();
            for (yi, f) in y.iter().zip(&g.forms) {
                c += yi * &f.constant;
            }
            debug_assert_eq!(c, -r);
            debug_assert!(!c.is_zero());
            Ok(RootOutcome::Inconsistent {
                obstruction: c,
                multipliers: y,
            })
        }
    }
}

/// Scale a rational root (gamma_2, .., gamma_k) to integer weights: delta_1
/// is the lcm of the denominators (1 when the root is integral or empty) and
/// delta_j = gamma_j * delta_1.
pub fn scale_to_integer_delta(gamma: &[Rational]) -> Vec<Int> {
    let d1 = crate::exact_linalg::denominator_lcm(gamma);
    let mut out = Vec::with_capacity(gamma.len() + 1);
    out.push(d1.clone());
    for g in gamma {
        let scaled = g * Rational::from_integer(d1.clone());
        debug_assert!(scaled.is_integer());
        out.push(scaled.to_integer());
    }
    out
}
