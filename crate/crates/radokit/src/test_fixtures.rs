//! Shared fixtures for unit tests.

use crate::system_model::DkSystem;

/// The worked 2-dimensional bipartite example:
///   2x1 + 2x2 - 5y1 + 10y2 = 0
///    x1 + 3x2 + 7y1 -  2y2 = 0
pub fn paper_system() -> DkSystem {
    DkSystem::from_i64(2, &[&[&[2, 1], &[2, 3]], &[&[-5, 7], &[10, -2]]])
}

/// x + y - 3z = 0 as a single-group system; fails the columns condition.
pub fn x_plus_y_eq_3z() -> DkSystem {
    DkSystem::from_i64(1, &[&[&[1], &[1], &[-3]]])
}

/// Schur's equation x + y - z = 0 as a single-group system.
pub fn schur_system() -> DkSystem {
    DkSystem::from_i64(1, &[&[&[1], &[1], &[-1]]])
}
