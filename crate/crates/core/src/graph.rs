//! Directed graphs on dense vertex ids, vertex sets, paths and neighbourhoods.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {0} repeats in a path")]
    RepeatedVertex(usize),
}

/// Edge direction used by neighbourhood queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Out,
    In,
}

/// Simple digraph: no loops, no parallel edges. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    m: usize,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { n, out_adj: vec![Vec::new(); n], in_adj: vec![Vec::new(); n], m: 0 }
    }

    /// Strict constructor: loops and repeated edges are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, edges, true)
    }

    /// Like [`Digraph::from_edges`] but silently merges repeated edges.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, edges, false)
    }

    fn build<I>(n: usize, edges: I, strict: bool) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out_adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            out_adj[u].push(v);
        }
        let mut in_adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if strict {
                if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                    return Err(GraphError::DuplicateEdge(u, w[0]));
                }
            }
            list.dedup();
            m += list.len();
            for &v in list.iter() {
                in_adj[v].push(u);
            }
        }
        Ok(Digraph { n, out_adj, in_adj, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn neighbors(&self, v: usize, dir: Direction) -> &[usize] {
        match dir {
            Direction::Out => &self.out_adj[v],
            Direction::In => &self.in_adj[v],
        }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn reversed(&self) -> Digraph {
        Digraph { n: self.n, out_adj: self.in_adj.clone(), in_adj: self.out_adj.clone(), m: self.m }
    }

    /// Subgraph induced by `keep`; vertex `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut map = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i;
        }
        let edges = keep.iter().enumerate().flat_map(|(i, &v)| {
            let map = &map;
            self.out_adj[v].iter().filter(move |&&w| map[w] != usize::MAX).map(move |&w| (i, map[w]))
        });
        Digraph::from_edges_dedup(keep.len(), edges).expect("induced subgraph is simple")
    }

    /// `G - removed`, with the maps between old and new ids.
    pub fn without(&self, removed: &VertexSet) -> Subgraph {
        let keep: Vec<usize> = (0..self.n).filter(|v| !removed.contains(*v)).collect();
        Subgraph::new(self, keep)
    }

    /// Breadth-first distances from `sources`, truncated at `limit`, walking only
    /// through vertices with `allowed[v]` (when given). Sources are always at distance 0.
    pub fn bfs(
        &self,
        sources: &[usize],
        dir: Direction,
        limit: Option<usize>,
        allowed: Option<&[bool]>,
    ) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            if limit.is_some_and(|l| dv >= l) {
                continue;
            }
            for &w in self.neighbors(v, dir) {
                if dist[w].is_none() && allowed.is_none_or(|a| a[w]) {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `N_d^+(v)`, which always contains `v`.
    pub fn out_neighborhood(&self, v: usize, d: usize) -> Result<VertexSet, GraphError> {
        self.neighborhood(v, d, Direction::Out)
    }

    /// `N_d^-(v)`, which always contains `v`.
    pub fn in_neighborhood(&self, v: usize, d: usize) -> Result<VertexSet, GraphError> {
        self.neighborhood(v, d, Direction::In)
    }

    pub fn neighborhood(&self, v: usize, d: usize, dir: Direction) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(self.ball(&[v], d, dir))
    }

    /// Union of the radius-`d` balls around the members of `x`.
    pub fn set_neighborhood(
        &self,
        x: &VertexSet,
        d: usize,
        dir: Direction,
    ) -> Result<VertexSet, GraphError> {
        for v in x.iter() {
            self.check_vertex(v)?;
        }
        Ok(self.ball(x.as_slice(), d, dir))
    }

    fn ball(&self, sources: &[usize], d: usize, dir: Direction) -> VertexSet {
        let dist = self.bfs(sources, dir, Some(d), None);
        VertexSet::from_sorted_unchecked((0..self.n).filter(|&v| dist[v].is_some()).collect())
    }

    /// Reachability matrix (`reach[u][v]` iff a directed path from `u` to `v`, `u` included).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|v| self.bfs(&[v], Direction::Out, None, None).iter().map(Option::is_some).collect())
            .collect()
    }

    /// All-pairs shortest directed distances.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n).map(|v| self.bfs(&[v], Direction::Out, None, None)).collect()
    }

    pub fn underlying_undirected(&self) -> UndirectedGraph {
        UndirectedGraph::from_edges(self.n, self.edges()).expect("edges are in range")
    }

    pub fn is_dag(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// A topological order, or a directed cycle (first vertex repeated at the end).
    pub fn topological_order(&self) -> Result<Vec<usize>, Dipath> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.out_adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() == self.n {
            return Ok(order);
        }
        // Every leftover vertex has a leftover in-neighbour; walk backwards until a repeat.
        let start = (0..self.n).find(|&v| indeg[v] > 0).unwrap();
        let mut seen = vec![usize::MAX; self.n];
        let mut walk = vec![start];
        seen[start] = 0;
        let mut cur = start;
        loop {
            let prev = *self.in_adj[cur].iter().find(|&&u| indeg[u] > 0).unwrap();
            if seen[prev] != usize::MAX {
                let mut cycle: Vec<usize> = walk[seen[prev]..].to_vec();
                cycle.reverse();
                cycle.push(cycle[0]);
                return Err(Dipath::new(cycle));
            }
            seen[prev] = walk.len();
            walk.push(prev);
            cur = prev;
        }
    }

    /// Sides `(A, B)` with every edge from `A` to `B`; isolated vertices go to `A`.
    pub fn directed_bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for v in 0..self.n {
            match (self.out_degree(v) > 0, self.in_degree(v) > 0) {
                (true, true) => return None,
                (false, true) => b.push(v),
                _ => a.push(v),
            }
        }
        Some((VertexSet::from_sorted_unchecked(a), VertexSet::from_sorted_unchecked(b)))
    }

    pub fn is_directed_bipartite(&self) -> bool {
        self.directed_bipartition().is_some()
    }

    /// Number of orientation changes along `path`, read in the underlying graph.
    /// A step with both orientations present counts as forward.
    pub fn count_alternations(&self, path: &[usize]) -> Result<usize, GraphError> {
        let forward = self.step_orientations(path)?;
        Ok(forward.windows(2).filter(|w| w[0] != w[1]).count())
    }

    fn step_orientations(&self, path: &[usize]) -> Result<Vec<bool>, GraphError> {
        let mut seen = vec![false; self.n];
        for &v in path {
            self.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::RepeatedVertex(v));
            }
        }
        path.windows(2)
            .map(|w| {
                if self.has_edge(w[0], w[1]) {
                    Ok(true)
                } else if self.has_edge(w[1], w[0]) {
                    Ok(false)
                } else {
                    Err(GraphError::NotAdjacent(w[0], w[1]))
                }
            })
            .collect()
    }

    /// True iff `path` has at least two edges and alternates at every inner vertex.
    pub fn is_alternating_path_model(&self, path: &[usize]) -> bool {
        match self.count_alternations(path) {
            Ok(a) => path.len() >= 3 && a == path.len() - 2,
            Err(_) => false,
        }
    }
}

/// Induced subgraph together with its id maps.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Digraph,
    pub to_old: Vec<usize>,
    pub to_new: Vec<Option<usize>>,
}

impl Subgraph {
    pub fn new(g: &Digraph, keep: Vec<usize>) -> Self {
        let mut to_new = vec![None; g.n()];
        for (i, &v) in keep.iter().enumerate() {
            to_new[v] = Some(i);
        }
        Subgraph { graph: g.induced(&keep), to_old: keep, to_new }
    }

    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.to_old[v]).collect()
    }

    pub fn project(&self, set: &VertexSet) -> VertexSet {
        set.iter().filter_map(|v| self.to_new[v]).collect()
    }
}

/// Strictly increasing list of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_sorted_unchecked(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Boolean membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v] = true;
        }
        m
    }

    pub fn check_in(&self, g: &Digraph) -> Result<(), GraphError> {
        self.iter().try_for_each(|v| g.check_vertex(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Vertex sequence claimed to be a directed path (or closed cycle) of some host.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dipath {
    pub vertices: Vec<usize>,
}

impl Dipath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Dipath { vertices }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    fn edges_present(&self, g: &Digraph) -> bool {
        self.vertices.iter().all(|&v| v < g.n()) && self.edges().all(|(u, v)| g.has_edge(u, v))
    }

    /// Nonempty, distinct vertices, consecutive pairs are edges.
    pub fn verify_path(&self, g: &Digraph) -> bool {
        !self.vertices.is_empty() && self.edges_present(g) && all_distinct(&self.vertices)
    }

    /// Closed walk with at least two edges, first = last, otherwise distinct.
    pub fn verify_cycle(&self, g: &Digraph) -> bool {
        let k = self.vertices.len();
        k >= 3
            && self.vertices[0] == self.vertices[k - 1]
            && self.edges_present(g)
            && all_distinct(&self.vertices[..k - 1])
    }
}

fn all_distinct(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Accepts each edge in any orientation; repeats merge. Loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        Ok(UndirectedGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Both orientations of every edge.
    pub fn bidirect(&self) -> Digraph {
        Digraph::from_edges(self.n, self.edges().flat_map(|(u, v)| [(u, v), (v, u)]))
            .expect("bidirected graph is simple")
    }

    /// Whether the vertices in the bitmask `mask` induce a connected subgraph.
    pub fn is_connected_mask(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                let bit = 1u64 << w;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(w);
                }
            }
        }
        seen == mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Digraph::from_edges(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert!(matches!(
            Digraph::from_edges(2, [(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(0, _))
        ));
        assert!(Digraph::from_edges(2, [(0, 1), (1, 0)]).is_ok());
        assert!(Digraph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_is_consistent() {
        let g = Digraph::from_edges(4, [(2, 0), (0, 1), (0, 3), (3, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (2, 0), (3, 1)]);
        assert_eq!(g.in_neighbors(1), &[0, 3]);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn zero_radius_ball_is_singleton() {
        let g = path(4);
        for v in 0..4 {
            assert_eq!(g.out_neighborhood(v, 0).unwrap(), VertexSet::singleton(v));
        }
        assert!(g.out_neighborhood(9, 1).is_err());
        assert_eq!(g.out_neighborhood(0, 2).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(g.in_neighborhood(3, 1).unwrap().as_slice(), &[2, 3]);
    }

    #[test]
    fn topological_order_and_cycle_witness() {
        let g = path(5);
        let order = g.topological_order().unwrap();
        let pos: Vec<usize> = {
            let mut p = vec![0; 5];
            order.iter().enumerate().for_each(|(i, &v)| p[v] = i);
            p
        };
        assert!(g.edges().all(|(u, v)| pos[u] < pos[v]));
        let c = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let cyc = c.topological_order().unwrap_err();
        assert!(cyc.verify_cycle(&c));
        assert!(!c.is_dag());
    }

    #[test]
    fn bipartition() {
        assert!(path(3).directed_bipartition().is_none());
        let g = Digraph::from_edges(4, [(0, 1), (2, 1)]).unwrap();
        let (a, b) = g.directed_bipartition().unwrap();
        assert_eq!(a.as_slice(), &[0, 2, 3]);
        assert_eq!(b.as_slice(), &[1]);
    }

    #[test]
    fn alternations() {
        let g = path(4);
        assert_eq!(g.count_alternations(&[0, 1, 2, 3]).unwrap(), 0);
        let ap = Digraph::from_edges(4, [(0, 1), (2, 1), (2, 3)]).unwrap();
        assert_eq!(ap.count_alternations(&[0, 1, 2, 3]).unwrap(), 2);
        assert!(ap.is_alternating_path_model(&[0, 1, 2, 3]));
        assert!(ap.count_alternations(&[0, 2]).is_err());
        assert!(ap.count_alternations(&[0, 1, 0]).is_err());
    }

    #[test]
    fn undirected_projection_and_bidirect() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        let u = g.underlying_undirected();
        assert_eq!(u.edge_count(), 2);
        let b = u.bidirect();
        assert_eq!(b.edge_count(), 4);
        assert_eq!(b.underlying_undirected(), u);
    }

    #[test]
    fn vertex_set_ops() {
        let a: VertexSet = vec![3, 1, 2, 3].into();
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        let b: VertexSet = vec![2, 5].into();
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[2]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert!(VertexSet::singleton(2).is_subset(&a));
    }
}
