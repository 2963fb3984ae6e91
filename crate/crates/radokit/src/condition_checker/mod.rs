//! Decision procedures for the columns condition and its k-partite
//! extension, producing machine-verifiable integer certificates.

mod classic;
mod kcolumns;
pub(crate) mod partitions;

pub use classic::{check_columns_condition, verify_columns_certificate, ColumnsCertificate};
pub use kcolumns::{
    check_k_columns_condition, delta_space, scaled_passes_columns_condition, verify_k_certificate,
    CheckOutcome, KCertificate, LevelPartition, SearchLimits, DEFAULT_NODE_BUDGET,
};
pub(crate) use kcolumns::assemble_certificate;
