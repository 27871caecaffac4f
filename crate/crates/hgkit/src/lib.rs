//! Combinatorial structure detection for finite bipartite relations and
//! finite groups: exact half-graph counting and search, homogeneous
//! partition checking and refinement, coset-union approximation of group
//! subsets, and the binary-tree extraction calculus connecting trees to
//! half-graphs.
//!
//! All verdicts are decided in exact rational arithmetic; every randomized
//! path takes an explicit seed and is bit-reproducible.

pub mod bigraph;
pub mod budget;
pub mod error;
pub mod gen;
pub mod group;
pub mod halfgraph;
pub mod io;
pub mod ratio;
pub mod regularity;
pub mod tree;

pub use error::{Error, Result};
