//! Fixed-parameter solver for skew-symmetric multicut and its front-ends:
//! Almost 2-SAT, odd cycle transversal, edge bipartization and deletion
//! q-Horn backdoor detection.

pub mod brute_force;
pub mod components;
pub mod error;
pub mod formats;
pub mod gen;
pub mod graph;
pub mod reductions;
mod scc;
pub mod separators;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{ArcId, ArcSet, SetSymmetry, SkewGraph, VertexId, VertexSet};
