use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, VertexSet};

/// Host subgraph assigned to one pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSet {
    pub vertices: VertexSet,
    pub edges: Vec<(usize, usize)>,
    pub source: usize,
    pub sink: usize,
}

impl BranchSet {
    pub fn singleton(v: usize) -> Self {
        BranchSet { vertices: VertexSet::singleton(v), edges: Vec::new(), source: v, sink: v }
    }

    /// Branch on `vertices` using every host edge between them.
    pub fn induced(host: &Digraph, vertices: VertexSet, source: usize, sink: usize) -> Self {
        let edges = vertices
            .iter()
            .flat_map(|u| host.out_neighbors(u).iter().filter(|&&w| vertices.contains(w)).map(move |&w| (u, w)))
            .collect();
        BranchSet { vertices, edges, source, sink }
    }

    /// Shortest-path distances inside the branch from `from`.
    fn distances(&self, from: usize, reverse: bool) -> Vec<(usize, usize)> {
        let mut dist = vec![(from, 0usize)];
        let mut queue = VecDeque::from([(from, 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            for &(a, b) in &self.edges {
                let (x, y) = if reverse { (b, a) } else { (a, b) };
                if x == v && !dist.iter().any(|&(w, _)| w == y) {
                    dist.push((y, d + 1));
                    queue.push_back((y, d + 1));
                }
            }
        }
        dist
    }

    fn distance(&self, from: usize, to: usize) -> Option<usize> {
        self.distances(from, false).into_iter().find(|&(w, _)| w == to).map(|(_, d)| d)
    }
}

/// Model of a pattern in a host: one branch per pattern vertex and one host edge per
/// pattern edge (indexed like `pattern.edges()`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedModel {
    pub branches: Vec<BranchSet>,
    pub edge_images: Vec<(usize, usize)>,
    /// When set, every connection inside a branch must have length at most this.
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    BranchCount { expected: usize, found: usize },
    EdgeImageCount { expected: usize, found: usize },
    EmptyBranch { branch: usize },
    BadBranchEdge { branch: usize, edge: (usize, usize) },
    BadTerminal { branch: usize, vertex: usize },
    /// Branch sets of two pattern vertices share a host vertex.
    Overlap { first: usize, second: usize, vertex: usize },
    /// Image is not a host edge, or does not run from the tail's branch to the head's branch.
    BadEdgeImage { edge: usize },
    RepeatedEdgeImage { edge: usize },
    InOutUnreachable { branch: usize, from: usize, to: usize },
    SourceMisses { branch: usize, target: usize },
    SinkMisses { branch: usize, origin: usize },
    TooDeep { branch: usize, from: usize, to: usize, length: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub violations: Vec<Violation>,
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DirectedModel {
    /// Singleton branches: `g` as a model of itself.
    pub fn identity(g: &Digraph) -> Self {
        DirectedModel {
            branches: (0..g.n()).map(BranchSet::singleton).collect(),
            edge_images: g.edges().collect(),
            depth: Some(0),
        }
    }

    pub fn with_depth(mut self, depth: Option<usize>) -> Self {
        self.depth = depth;
        self
    }

    /// Renames host vertices through `map` (e.g. from an induced subgraph to its parent).
    pub fn relabel(&self, map: &[usize]) -> Self {
        let branches = self
            .branches
            .iter()
            .map(|b| BranchSet {
                vertices: b.vertices.iter().map(|v| map[v]).collect(),
                edges: b.edges.iter().map(|&(u, v)| (map[u], map[v])).collect(),
                source: map[b.source],
                sink: map[b.sink],
            })
            .collect();
        DirectedModel {
            branches,
            edge_images: self.edge_images.iter().map(|&(u, v)| (map[u], map[v])).collect(),
            depth: self.depth,
        }
    }

    /// Host vertices carrying the images of edges into (`ins`) and out of (`outs`) each branch.
    pub fn terminals(&self, pattern: &Digraph) -> (Vec<VertexSet>, Vec<VertexSet>) {
        let h = pattern.n();
        let mut ins = vec![Vec::new(); h];
        let mut outs = vec![Vec::new(); h];
        for ((u, w), &(x, y)) in pattern.edges().zip(&self.edge_images) {
            outs[u].push(x);
            ins[w].push(y);
        }
        (ins.into_iter().map(VertexSet::from).collect(), outs.into_iter().map(VertexSet::from).collect())
    }
}

/// Checks every clause of the model definition and reports each failure.
pub fn verify_model(pattern: &Digraph, host: &Digraph, model: &DirectedModel) -> ModelReport {
    let mut out = Vec::new();
    let h = pattern.n();
    if model.branches.len() != h {
        out.push(Violation::BranchCount { expected: h, found: model.branches.len() });
        return ModelReport { violations: out };
    }
    if model.edge_images.len() != pattern.edge_count() {
        out.push(Violation::EdgeImageCount { expected: pattern.edge_count(), found: model.edge_images.len() });
        return ModelReport { violations: out };
    }
    let mut owner = vec![usize::MAX; host.n()];
    for (i, b) in model.branches.iter().enumerate() {
        if b.vertices.is_empty() {
            out.push(Violation::EmptyBranch { branch: i });
        }
        for v in b.vertices.iter() {
            if v >= host.n() {
                out.push(Violation::BadTerminal { branch: i, vertex: v });
                continue;
            }
            if owner[v] != usize::MAX {
                out.push(Violation::Overlap { first: owner[v], second: i, vertex: v });
            } else {
                owner[v] = i;
            }
        }
        for &(x, y) in &b.edges {
            if !(host.has_edge(x, y) && b.vertices.contains(x) && b.vertices.contains(y)) {
                out.push(Violation::BadBranchEdge { branch: i, edge: (x, y) });
            }
        }
        for t in [b.source, b.sink] {
            if !b.vertices.contains(t) {
                out.push(Violation::BadTerminal { branch: i, vertex: t });
            }
        }
    }
    if !out.is_empty() {
        return ModelReport { violations: out };
    }
    let mut seen = std::collections::HashSet::new();
    for (idx, ((u, w), &(x, y))) in pattern.edges().zip(&model.edge_images).enumerate() {
        if !host.has_edge(x, y) || owner[x] != u || owner[y] != w {
            out.push(Violation::BadEdgeImage { edge: idx });
        }
        if !seen.insert((x, y)) {
            out.push(Violation::RepeatedEdgeImage { edge: idx });
        }
    }
    if !out.is_empty() {
        return ModelReport { violations: out };
    }
    let (ins, outs) = model.terminals(pattern);
    for (i, b) in model.branches.iter().enumerate() {
        let within = |from: usize, to: usize| -> Result<(), Option<usize>> {
            match b.distance(from, to) {
                None => Err(None),
                Some(d) if model.depth.is_some_and(|r| d > r) => Err(Some(d)),
                Some(_) => Ok(()),
            }
        };
        for a in ins[i].iter() {
            for c in outs[i].iter() {
                match within(a, c) {
                    Ok(()) => {}
                    Err(None) => out.push(Violation::InOutUnreachable { branch: i, from: a, to: c }),
                    Err(Some(length)) => out.push(Violation::TooDeep { branch: i, from: a, to: c, length }),
                }
            }
        }
        for c in outs[i].iter() {
            match within(b.source, c) {
                Ok(()) => {}
                Err(None) => out.push(Violation::SourceMisses { branch: i, target: c }),
                Err(Some(length)) => out.push(Violation::TooDeep { branch: i, from: b.source, to: c, length }),
            }
        }
        for a in ins[i].iter() {
            match within(a, b.sink) {
                Ok(()) => {}
                Err(None) => out.push(Violation::SinkMisses { branch: i, origin: a }),
                Err(Some(length)) => out.push(Violation::TooDeep { branch: i, from: a, to: b.sink, length }),
            }
        }
    }
    ModelReport { violations: out }
}

pub fn is_valid_model(pattern: &Digraph, host: &Digraph, model: &DirectedModel) -> bool {
    verify_model(pattern, host, model).is_valid()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::crown;

    #[test]
    fn identity_model_is_valid() {
        let g = crown(3).unwrap().graph;
        let m = DirectedModel::identity(&g);
        assert!(verify_model(&g, &g, &m).is_valid());
    }

    #[test]
    fn overlap_is_reported() {
        let g = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let p = Digraph::empty(2);
        let m = DirectedModel {
            branches: vec![BranchSet::singleton(0), BranchSet::singleton(0)],
            edge_images: vec![],
            depth: None,
        };
        let r = verify_model(&p, &g, &m);
        assert!(matches!(r.violations[0], Violation::Overlap { first: 0, second: 1, vertex: 0 }));
    }

    #[test]
    fn depth_is_enforced() {
        // Pattern a -> b -> c; host path 0..5 with b's branch {1, 2, 3}.
        let p = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let g = Digraph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        let m = DirectedModel {
            branches: vec![
                BranchSet::singleton(0),
                BranchSet::induced(&g, vec![1, 2, 3].into(), 1, 3),
                BranchSet::singleton(4),
            ],
            edge_images: vec![(0, 1), (3, 4)],
            depth: Some(2),
        };
        assert!(verify_model(&p, &g, &m).is_valid());
        let shallow = m.clone().with_depth(Some(1));
        assert!(verify_model(&p, &g, &shallow)
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TooDeep { length: 2, .. })));
    }
}
