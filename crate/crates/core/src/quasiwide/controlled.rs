use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::scattered::is_scattered;
use super::QuasiError;
use crate::graph::{Digraph, Direction, VertexSet};

/// Edge `a -> b` of a controlled bipartite graph. `a` indexes the A side, `b` is a
/// ground vertex, and `eta` lists ground vertices in increasing level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlledEdge {
    pub a: usize,
    pub b: usize,
    pub eta: Vec<usize>,
}

/// An `r`-controlled directed bipartite graph `A -> B`.
///
/// A-vertices are copies of ground vertices (`a[i]` is the ground vertex of copy `i`);
/// B-vertices are ground vertices. Base and level are kept both per A-copy (`beta`,
/// `lambda`) and per ground vertex (`ground_beta`, `ground_lambda`) for the labels
/// that occur inside `eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledBipartite {
    pub r: usize,
    pub a: Vec<usize>,
    pub b: VertexSet,
    pub edges: Vec<ControlledEdge>,
    pub beta: Vec<Option<usize>>,
    pub lambda: Vec<usize>,
    pub ground_beta: Vec<Option<usize>>,
    pub ground_lambda: Vec<usize>,
    succ: Vec<Vec<usize>>,
    pred: HashMap<usize, Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

/// Crown `S_q` inside a controlled bipartite graph: principals `b` (ground vertices)
/// and one connector per pair `i < j` in lexicographic order (A indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlledCrown {
    pub b: Vec<usize>,
    pub a: Vec<usize>,
}

impl ControlledCrown {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// Crown edges as `(connector A index, principal ground vertex)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let q = self.b.len();
        let mut out = Vec::new();
        let mut k = 0;
        for i in 0..q {
            for j in i + 1..q {
                if let Some(&a) = self.a.get(k) {
                    out.push((a, self.b[i]));
                    out.push((a, self.b[j]));
                }
                k += 1;
            }
        }
        out
    }
}

/// Scattered outcome inside a controlled graph: `set ⊆ B` is 1-scattered once the
/// A-copies in `deleted` are removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlledScattered {
    pub deleted: Vec<usize>,
    pub set: VertexSet,
}

impl ControlledBipartite {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r: usize,
        a: Vec<usize>,
        b: VertexSet,
        mut edges: Vec<ControlledEdge>,
        beta: Vec<Option<usize>>,
        lambda: Vec<usize>,
        ground_beta: Vec<Option<usize>>,
        ground_lambda: Vec<usize>,
    ) -> Result<Self, QuasiError> {
        let bad = |m: String| Err(QuasiError::Precondition(m));
        if beta.len() != a.len() || lambda.len() != a.len() {
            return bad("beta and lambda must have one entry per A-vertex".into());
        }
        if ground_beta.len() != ground_lambda.len() {
            return bad("ground labels must have equal length".into());
        }
        edges.sort_by_key(|e| (e.a, e.b));
        let mut succ = vec![Vec::new(); a.len()];
        let mut pred: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.a >= a.len() || !b.contains(e.b) {
                return bad(format!("edge ({}, {}) leaves A x B", e.a, e.b));
            }
            if e.eta.iter().any(|&x| x >= ground_beta.len()) {
                return bad(format!("eta of edge ({}, {}) has an unlabelled vertex", e.a, e.b));
            }
            if index.insert((e.a, e.b), i).is_some() {
                return bad(format!("duplicate edge ({}, {})", e.a, e.b));
            }
            succ[e.a].push(e.b);
            pred.entry(e.b).or_default().push(e.a);
        }
        Ok(ControlledBipartite { r, a, b, edges, beta, lambda, ground_beta, ground_lambda, succ, pred, index })
    }

    /// Successors (ground B-vertices) of A-copy `a`, increasing.
    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    /// Predecessors (A indices) of B-vertex `b`, increasing.
    pub fn predecessors(&self, b: usize) -> &[usize] {
        self.pred.get(&b).map_or(&[], Vec::as_slice)
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&ControlledEdge> {
        self.index.get(&(a, b)).map(|&i| &self.edges[i])
    }

    pub fn max_out_degree(&self) -> usize {
        self.succ.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same A indexing; drops A-copies with `keep_a[i] == false` and B-vertices outside
    /// `keep_b`. With `clear_foreign_bases`, bases outside `keep_b` become undefined.
    pub fn restrict(&self, keep_a: &[bool], keep_b: &VertexSet, clear_foreign_bases: bool) -> Self {
        let edges = self.edges.iter().filter(|e| keep_a[e.a] && keep_b.contains(e.b)).cloned().collect();
        let beta = self
            .beta
            .iter()
            .map(|&x| x.filter(|&y| !clear_foreign_bases || keep_b.contains(y)))
            .collect();
        let b = self.b.intersection(keep_b);
        ControlledBipartite::new(
            self.r,
            self.a.clone(),
            b,
            edges,
            beta,
            self.lambda.clone(),
            self.ground_beta.clone(),
            self.ground_lambda.clone(),
        )
        .expect("restriction of a consistent instance")
    }

    /// Checks the labelling constraints; returns the first violation found.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, (&l, &bt)) in self.lambda.iter().zip(&self.beta).enumerate() {
            if l > self.r + 1 {
                return Err(format!("level {l} of A-vertex {i} exceeds r + 1"));
            }
            if (l == self.r + 1) != bt.is_none() {
                return Err(format!("A-vertex {i}: level r + 1 must coincide with an undefined base"));
            }
            if bt.is_some_and(|x| !self.b.contains(x)) {
                return Err(format!("A-vertex {i} has a base outside B"));
            }
        }
        for e in &self.edges {
            if e.eta.len() > self.r + 1 {
                return Err(format!("eta of ({}, {}) is longer than r + 1", e.a, e.b));
            }
            if e.eta.iter().any(|&x| self.ground_beta[x] != Some(e.b)) {
                return Err(format!("eta of ({}, {}) has a vertex based elsewhere", e.a, e.b));
            }
            if e.eta.windows(2).any(|w| self.ground_lambda[w[0]] >= self.ground_lambda[w[1]]) {
                return Err(format!("eta of ({}, {}) is not strictly increasing in level", e.a, e.b));
            }
            if self.beta[e.a] == Some(e.b) && e.eta.iter().any(|&x| self.ground_lambda[x] >= self.lambda[e.a]) {
                return Err(format!("eta of ({}, {}) reaches the level of its tail", e.a, e.b));
            }
        }
        Ok(())
    }

    /// Label avoidance for every crown edge, with ground identification of A-copies,
    /// plus disjointness of connector and principal ground vertices.
    pub fn is_controlled_crown(&self, c: &ControlledCrown) -> bool {
        let q = c.b.len();
        if q == 0 || c.a.len() != q * (q - 1) / 2 {
            return false;
        }
        let ground_a: Vec<usize> = c.a.iter().map(|&i| self.a[i]).collect();
        let mut all: Vec<usize> = ground_a.iter().chain(&c.b).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) || c.a.iter().any(|&i| i >= self.a.len()) {
            return false;
        }
        c.edges().iter().all(|&(a, b)| {
            self.edge(a, b).is_some_and(|e| e.eta.iter().all(|x| !ground_a.contains(x)))
        })
    }

    /// No remaining A-copy has two members of `set` among its successors.
    pub fn is_one_scattered(&self, deleted: &[usize], set: &VertexSet) -> bool {
        (0..self.a.len())
            .filter(|i| !deleted.contains(i))
            .all(|i| self.succ[i].iter().filter(|&&b| set.contains(b)).count() < 2)
    }
}

/// Builds the controlled graph of an `r`-scattered set `i`: `B = i`, one A-copy for
/// each vertex reaching two members of `i` within `r + 1` steps, an edge to every
/// member it reaches, labelled by a fixed shortest path.
pub fn build_controlled_bipartite(g: &Digraph, i: &VertexSet, r: usize) -> Result<ControlledBipartite, QuasiError> {
    i.check_in(g)?;
    if !is_scattered(g, i, r) {
        return Err(QuasiError::NotScattered);
    }
    let n = g.n();
    let mut dist_to = vec![vec![None; n]; i.len()];
    for (k, u) in i.iter().enumerate() {
        dist_to[k] = g.bfs(&[u], Direction::In, Some(r + 1), None);
    }
    let mut ground_lambda = vec![r + 1; n];
    let mut ground_beta = vec![None; n];
    for (k, u) in i.iter().enumerate() {
        for v in 0..n {
            if let Some(d) = dist_to[k][v] {
                ground_lambda[v] = ground_lambda[v].min(d);
                if d <= r {
                    ground_beta[v] = Some(u);
                }
            }
        }
    }
    let members: Vec<usize> = i.iter().collect();
    let mut a = Vec::new();
    let mut edges = Vec::new();
    for v in 0..n {
        let reached: Vec<usize> = (0..members.len()).filter(|&k| dist_to[k][v].is_some()).collect();
        if reached.len() < 2 {
            continue;
        }
        let idx = a.len();
        a.push(v);
        let parent = bfs_parents(g, v, r + 1);
        for k in reached {
            let mut eta = Vec::new();
            let mut x = members[k];
            while x != v {
                eta.push(x);
                x = parent[x].expect("reached vertices have parents");
            }
            edges.push(ControlledEdge { a: idx, b: members[k], eta });
        }
    }
    let lambda: Vec<usize> = a.iter().map(|&v| ground_lambda[v]).collect();
    let beta: Vec<Option<usize>> = a.iter().map(|&v| ground_beta[v]).collect();
    let out = ControlledBipartite::new(r, a, i.clone(), edges, beta, lambda, ground_beta, ground_lambda)?;
    out.check_invariants().map_err(QuasiError::Internal)?;
    Ok(out)
}

fn bfs_parents(g: &Digraph, s: usize, limit: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.n()];
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if dist[x] == limit {
            continue;
        }
        for &y in g.out_neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    parent
}
