//! radokit: exact machinery for partition regularity of k-partite integer
//! linear systems.
//!
//! The crate decides the columns condition and its k-partite extension with
//! machine-verifiable integer certificates, searches bounded windows for
//! semi-monochromatic solutions under finite colorings (smod-p colorings are
//! built in), and runs a certificate-extraction pipeline that reconstructs
//! k-columns certificates from per-prime solution data via rank partitions,
//! determinant polynomials, and a common rational root.
//!
//! All arithmetic is exact; identical inputs produce identical outputs.

pub mod certificate_extractor;
pub mod cli;
pub mod colorings;
pub mod condition_checker;
pub mod error;
pub mod exact_linalg;
pub mod solution_search;
pub mod system_model;

#[cfg(test)]
pub(crate) mod test_fixtures;

pub use error::Error;
pub use exact_linalg::{Int, IntVector, RatVector, Rational};
