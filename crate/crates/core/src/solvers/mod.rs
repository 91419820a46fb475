//! Parameterized solvers for domination-type problems.
//!
//! Each solver branches only on verified scattered witnesses and falls back to
//! exhaustive search when no witness turns up within the scatter budget, so
//! answers are exact at every size that can be run. `exhausted` records whether
//! a fallback was taken anywhere in the search.
//!
//! Witness order: [`brute_force_solve`] returns the lexicographically least
//! witness among those of minimum size (exactly `k` for independent set). The
//! solvers return the first witness met in ascending branch order.

mod brute;
mod domination;
mod independent;
mod outbranching;
mod steiner;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Digraph, Direction, GraphError, VertexSet};

pub use brute::{brute_force_solve, BRUTE_FORCE_LIMIT};
pub use domination::{
    d_dominating_set, dominating_set, find_irrelevant_vertex, independent_dominating_set, reduce_target,
};
pub use independent::independent_set;
pub use outbranching::{dominating_outbranching, dominating_outbranching_bounded, BOUNDED_MAX_J, BOUNDED_MAX_W};
pub use steiner::{directed_steiner_outtree, OutTree, STEINER_MAX_TERMINALS};

/// Largest scatter deletion budget used when none is given.
pub const DEFAULT_SCATTER_BUDGET: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The predicate a witness must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `|D| <= k` and `N_d^+(D)` covers `W`.
    Dominating,
    /// Dominating (radius `d`) and no edge inside `D` in either direction.
    IndependentDominating,
    /// `|D| <= k`, `N^+(D)` covers `W`, and `G[D]` has a spanning out-branching.
    OutBranching,
    /// `|D| = k` and no member lies in the radius-`d` out-ball of another.
    Independent,
}

/// A solver entry point, as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Ds,
    Ids,
    Dds,
    Dob,
    Is,
}

impl Solver {
    pub const ALL: [Solver; 5] = [Solver::Ds, Solver::Ids, Solver::Dds, Solver::Dob, Solver::Is];

    pub fn variant(self) -> Variant {
        match self {
            Solver::Ds | Solver::Dds => Variant::Dominating,
            Solver::Ids => Variant::IndependentDominating,
            Solver::Dob => Variant::OutBranching,
            Solver::Is => Variant::Independent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solver::Ds => "ds",
            Solver::Ids => "ids",
            Solver::Dds => "dds",
            Solver::Dob => "dob",
            Solver::Is => "is",
        }
    }

    /// Runs the solver on the instance. `Ds` with `d > 1` runs the reduction-based solver.
    pub fn run(self, inst: &DominationInstance, scatter_budget: usize) -> Result<SolveOutcome, SolveError> {
        inst.validate()?;
        Ok(match self {
            Solver::Ds if inst.d == 1 => domination::solve_ds(inst, scatter_budget),
            Solver::Ds | Solver::Dds => domination::solve_dds(inst),
            Solver::Ids => domination::solve_ids(inst, scatter_budget),
            Solver::Dob => outbranching::solve_dob(inst, scatter_budget),
            Solver::Is => independent::solve_is(inst, scatter_budget),
        })
    }
}

impl std::str::FromStr for Solver {
    type Err = SolveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Solver::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| SolveError::Invalid(format!("unknown solver {s:?}")))
    }
}

/// Graph, size budget `k`, radius `d`, target set `w` and forbidden set `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationInstance {
    pub graph: Digraph,
    pub k: usize,
    pub d: usize,
    pub w: VertexSet,
    pub y: VertexSet,
}

impl DominationInstance {
    /// Radius 1, target `V(G)`, nothing forbidden.
    pub fn new(graph: Digraph, k: usize) -> Self {
        let w = VertexSet::range(graph.n());
        DominationInstance { graph, k, d: 1, w, y: VertexSet::new() }
    }

    pub fn with_radius(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_target(mut self, w: VertexSet) -> Self {
        self.w = w;
        self
    }

    pub fn with_forbidden(mut self, y: VertexSet) -> Self {
        self.y = y;
        self
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        self.w.check_in(&self.graph)?;
        self.y.check_in(&self.graph)?;
        if self.d == 0 {
            return Err(SolveError::Invalid("radius must be at least 1".into()));
        }
        Ok(())
    }

    /// `D` meets the defining predicate of `variant` on this instance.
    pub fn satisfies(&self, variant: Variant, set: &VertexSet) -> bool {
        let g = &self.graph;
        if set.check_in(g).is_err() || !set.is_disjoint(&self.y) {
            return false;
        }
        match variant {
            Variant::Dominating => set.len() <= self.k && verify_dominating(g, set, self.d, &self.w),
            Variant::IndependentDominating => {
                set.len() <= self.k && verify_dominating(g, set, self.d, &self.w) && verify_independent(g, set)
            }
            Variant::OutBranching => {
                set.len() <= self.k
                    && verify_dominating(g, set, 1, &self.w)
                    && (set.is_empty() || spanning_outbranching(g, set).is_some())
            }
            Variant::Independent => set.len() == self.k && verify_distance_independent(g, set, self.d),
        }
    }
}

/// Out-branching on `vertices` given by `(child, parent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutBranching {
    pub root: usize,
    pub vertices: VertexSet,
    pub parent: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Set(VertexSet),
    Branching(OutBranching),
}

impl Witness {
    pub fn vertices(&self) -> &VertexSet {
        match self {
            Witness::Set(s) => s,
            Witness::Branching(t) => &t.vertices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub feasible: bool,
    pub witness: Option<Witness>,
    pub exhausted: bool,
}

impl SolveOutcome {
    pub fn infeasible(exhausted: bool) -> Self {
        SolveOutcome { feasible: false, witness: None, exhausted }
    }

    pub fn found(witness: Witness, exhausted: bool) -> Self {
        SolveOutcome { feasible: true, witness: Some(witness), exhausted }
    }

    /// A feasible outcome carries a witness that passes the verifier for `variant`.
    pub fn certifies(&self, inst: &DominationInstance, variant: Variant) -> bool {
        if !self.feasible {
            return self.witness.is_none();
        }
        let Some(w) = &self.witness else {
            return false;
        };
        if let Witness::Branching(t) = w {
            if variant != Variant::OutBranching || !verify_outbranching(&inst.graph, t) {
                return false;
            }
        }
        inst.satisfies(variant, w.vertices())
    }
}

/// Every member of `w` lies in `N_d^+(D)`.
pub fn verify_dominating(g: &Digraph, set: &VertexSet, d: usize, w: &VertexSet) -> bool {
    if set.check_in(g).is_err() || w.check_in(g).is_err() {
        return false;
    }
    let dist = g.bfs(set.as_slice(), Direction::Out, Some(d), None);
    w.iter().all(|v| dist[v].is_some())
}

/// No edge between two members of `D`, in either direction.
pub fn verify_independent(g: &Digraph, set: &VertexSet) -> bool {
    verify_distance_independent(g, set, 1)
}

/// No member of `D` lies in the radius-`d` out-ball of another.
pub fn verify_distance_independent(g: &Digraph, set: &VertexSet, d: usize) -> bool {
    if set.check_in(g).is_err() {
        return false;
    }
    set.iter().all(|u| {
        let dist = g.bfs(&[u], Direction::Out, Some(d), None);
        set.iter().all(|x| x == u || dist[x].is_none())
    })
}

/// Tree edges are edges of `g`, every non-root vertex has exactly one parent, and
/// everything is reachable from the root.
pub fn verify_outbranching(g: &Digraph, t: &OutBranching) -> bool {
    if t.vertices.check_in(g).is_err() || !t.vertices.contains(t.root) || t.parent.len() + 1 != t.vertices.len() {
        return false;
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    let mut has_parent = vec![false; g.n()];
    for &(c, p) in &t.parent {
        if !t.vertices.contains(c) || !t.vertices.contains(p) || c == t.root || !g.has_edge(p, c) {
            return false;
        }
        if std::mem::replace(&mut has_parent[c], true) {
            return false;
        }
        children[p].push(c);
    }
    let mut seen = 1;
    let mut stack = vec![t.root];
    let mut visited = vec![false; g.n()];
    visited[t.root] = true;
    while let Some(v) = stack.pop() {
        for &c in &children[v] {
            if !std::mem::replace(&mut visited[c], true) {
                seen += 1;
                stack.push(c);
            }
        }
    }
    seen == t.vertices.len()
}

/// A BFS out-branching of `G[set]` from its least vertex that reaches all of `set`.
pub fn spanning_outbranching(g: &Digraph, set: &VertexSet) -> Option<OutBranching> {
    if set.is_empty() || set.check_in(g).is_err() {
        return None;
    }
    let mask = set.mask(g.n());
    set.iter().find_map(|root| {
        let mut parent = Vec::new();
        let mut seen = vec![false; g.n()];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &x in g.out_neighbors(v) {
                if mask[x] && !std::mem::replace(&mut seen[x], true) {
                    parent.push((x, v));
                    queue.push_back(x);
                }
            }
        }
        (parent.len() + 1 == set.len()).then(|| OutBranching { root, vertices: set.clone(), parent })
    })
}

/// Closed out-neighbourhood `N^+[v]`.
fn closed_out(g: &Digraph, v: usize) -> VertexSet {
    let mut s: VertexSet = g.out_neighbors(v).iter().copied().collect();
    s.insert(v);
    s
}
