//! Directed minors: models and their verifier, disjoint paths in DAGs, minor search
//! (acyclic, shallow and general hosts), butterfly and topological minors, and grad.

mod butterfly;
mod grad;
mod model;
mod paths;
mod search;
mod topological;

use thiserror::Error;

use crate::graph::{Dipath, GraphError};

pub use butterfly::{
    bipartite_minor_equiv_check, butterfly_contract, butterfly_search, is_butterfly_minor, replay_butterfly,
    BipartiteEquivalence, ButterflyStep, ButterflyWitness,
};
pub use grad::{densest_minor, grad, GRAD_MAX_VERTICES};
pub use model::{is_valid_model, verify_model, BranchSet, DirectedModel, ModelReport, Violation};
pub use paths::{dag_disjoint_paths, dag_disjoint_paths_bounded, verify_disjoint_paths, IntervalPartition};
pub use search::{dag_minor_check, general_minor_check, shallow_minor_check};
pub use topological::{topological_minor_check, Subdivision};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinorError {
    #[error("host is not acyclic (cycle {0:?})")]
    NotADag(Dipath),
    #[error("invalid interval partition: {0}")]
    InvalidPartition(String),
    #[error("pattern is not directed bipartite")]
    NotBipartite,
    #[error("edge ({0}, {1}) cannot be butterfly-contracted")]
    IllegalContraction(usize, usize),
    #[error("graph too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
