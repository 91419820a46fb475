//! Directed minors, crowns and scattered sets in sparse digraph classes, with
//! parameterized solvers for domination-type problems.
//!
//! Every search routine returns witnesses that are re-checked by an independent
//! verifier before they leave the library.

pub mod format;
pub mod acceptance;
pub mod generators;
pub mod graph;
pub mod iso;
pub mod minors;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod quasiwide;
pub mod solvers;

pub use graph::{Digraph, Dipath, Direction, GraphError, Subgraph, UndirectedGraph, VertexSet};
