//! Nice tree collections, their certification, assembly into spanning trees
//! and independent verification of the result.

mod assemble;
mod certify;
mod collection;
mod verify;

pub use assemble::{assemble, SpanningTreeFamily};
pub use certify::{certify_nice, index_set, CertifyError, NicenessFailure, NicenessWitness};
pub use collection::{Membership, RootedTree, TreeCollection};
pub use verify::{tree_path, verify_independent, Violation, VerifyReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IstError {
    #[error("tree collection invariant violated: {0}")]
    Invariant(String),
    #[error("witness inconsistent with graph: {0}")]
    Integrity(String),
    #[error("malformed tree family: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
