//! Independent spanning trees (ISTs) in random and pseudorandom graphs.
//!
//! The crate builds `k` spanning trees rooted at a common vertex `r` such that
//! for every vertex `v` the `r`-`v` paths in different trees share no vertex
//! other than `r` and `v`. Three constructors are provided:
//!
//! * [`dense::build_dense`] for dense binomial random graphs,
//! * [`sparse::build_sparse`] for sparse binomial random graphs,
//! * [`pseudo::build_pseudorandom`] for regular graphs with a spectral gap.
//!
//! Each constructor produces a small *nice* collection of trees together with
//! a connector witness ([`ist::NicenessWitness`]); [`ist::assemble`] turns the
//! pair into full spanning trees and [`ist::verify_independent`] checks the
//! result from scratch.

pub mod build;
pub mod connectivity;
pub mod dense;
pub mod edge_list;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod ist;
pub mod matching;
pub mod pseudo;
pub mod rng;
pub mod sparse;

pub use error::GraphError;
pub use graph::{BipartiteGraph, Graph, Vertex};
pub use rng::SeededRng;
