use serde::{Deserialize, Serialize};

use super::model::{BranchSet, DirectedModel};
use crate::graph::{Digraph, Direction, VertexSet};

/// Subdivision of a pattern in a host: pattern vertex `v` sits at `vertices[v]`, and
/// pattern edge `e` (in `pattern.edges()` order) becomes the directed path `paths[e]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    pub vertices: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

impl Subdivision {
    /// Paths join the right endpoints and are internally disjoint from everything else.
    pub fn verify(&self, pattern: &Digraph, host: &Digraph) -> bool {
        if self.vertices.len() != pattern.n() || self.paths.len() != pattern.edge_count() {
            return false;
        }
        let mut used = vec![false; host.n()];
        for &v in &self.vertices {
            if v >= host.n() || std::mem::replace(&mut used[v], true) {
                return false;
            }
        }
        for ((u, w), p) in pattern.edges().zip(&self.paths) {
            if p.len() < 2 || p[0] != self.vertices[u] || *p.last().unwrap() != self.vertices[w] {
                return false;
            }
            if !p.windows(2).all(|s| host.has_edge(s[0], s[1])) {
                return false;
            }
            for &x in &p[1..p.len() - 1] {
                if std::mem::replace(&mut used[x], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Directed model: each pattern vertex owns its image plus the interiors of its out-paths.
    pub fn to_model(&self, pattern: &Digraph, host: &Digraph) -> DirectedModel {
        let mut sets: Vec<Vec<usize>> = self.vertices.iter().map(|&v| vec![v]).collect();
        let mut images = Vec::new();
        for ((u, _), p) in pattern.edges().zip(&self.paths) {
            sets[u].extend_from_slice(&p[1..p.len() - 1]);
            images.push((p[p.len() - 2], p[p.len() - 1]));
        }
        let branches = sets
            .into_iter()
            .zip(&self.vertices)
            .map(|(s, &root)| BranchSet::induced(host, VertexSet::from(s), root, root))
            .collect();
        DirectedModel { branches, edge_images: images, depth: None }
    }
}

/// A subdivision of `pattern` inside `host`, by backtracking over vertex placements and paths.
pub fn topological_minor_check(pattern: &Digraph, host: &Digraph) -> Option<Subdivision> {
    if pattern.n() > host.n() || pattern.edge_count() > host.edge_count() {
        return None;
    }
    let mut s = State {
        pattern,
        host,
        pedges: pattern.edges().collect(),
        place: vec![usize::MAX; pattern.n()],
        used: vec![false; host.n()],
        paths: vec![Vec::new(); pattern.edge_count()],
    };
    s.place_vertex(0).then_some(Subdivision { vertices: s.place, paths: s.paths })
}

struct State<'a> {
    pattern: &'a Digraph,
    host: &'a Digraph,
    pedges: Vec<(usize, usize)>,
    place: Vec<usize>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
}

impl State<'_> {
    fn place_vertex(&mut self, v: usize) -> bool {
        if v == self.pattern.n() {
            return self.route_edge(0);
        }
        for x in 0..self.host.n() {
            if self.used[x]
                || self.host.out_degree(x) < self.pattern.out_degree(v)
                || self.host.in_degree(x) < self.pattern.in_degree(v)
            {
                continue;
            }
            self.place[v] = x;
            self.used[x] = true;
            if self.place_vertex(v + 1) {
                return true;
            }
            self.used[x] = false;
            self.place[v] = usize::MAX;
        }
        false
    }

    fn route_edge(&mut self, e: usize) -> bool {
        if e == self.pedges.len() {
            return true;
        }
        let (u, w) = self.pedges[e];
        let (a, b) = (self.place[u], self.place[w]);
        if self.host.has_edge(a, b) {
            // The direct edge uses no interior vertex, so it is never worse.
            self.paths[e] = vec![a, b];
            return self.route_edge(e + 1);
        }
        let allowed: Vec<bool> = self.used.iter().map(|&x| !x).collect();
        let mut allowed_b = allowed.clone();
        allowed_b[b] = true;
        let reach = self.host.bfs(&[b], Direction::In, None, Some(&allowed_b));
        if self.host.out_neighbors(a).iter().all(|&x| !allowed[x] || reach[x].is_none()) {
            return false;
        }
        let mut path = vec![a];
        self.walk(e, b, &mut path)
    }

    fn walk(&mut self, e: usize, b: usize, path: &mut Vec<usize>) -> bool {
        let cur = *path.last().unwrap();
        let next: Vec<usize> = self.host.out_neighbors(cur).to_vec();
        for x in next {
            if x == b && path.len() > 1 {
                path.push(b);
                self.paths[e] = path.clone();
                if self.route_edge(e + 1) {
                    return true;
                }
                path.pop();
                continue;
            }
            if self.used[x] {
                continue;
            }
            self.used[x] = true;
            path.push(x);
            if self.walk(e, b, path) {
                return true;
            }
            path.pop();
            self.used[x] = false;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::crown;
    use crate::minors::is_valid_model;

    fn subdivide(g: &Digraph) -> Digraph {
        let n = g.n();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut out = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            out.push((u, n + i));
            out.push((n + i, v));
        }
        Digraph::from_edges(n + edges.len(), out).unwrap()
    }

    #[test]
    fn subgraph_is_topological_minor() {
        let g = crown(3).unwrap().graph;
        let s = topological_minor_check(&g, &g).unwrap();
        assert!(s.verify(&g, &g));
    }

    #[test]
    fn subdivided_crown() {
        let s3 = crown(3).unwrap().graph;
        let host = subdivide(&s3);
        let s = topological_minor_check(&s3, &host).unwrap();
        assert!(s.verify(&s3, &host));
        assert!(is_valid_model(&s3, &host, &s.to_model(&s3, &host)));
        let c4 = crown(4).unwrap().graph;
        assert!(topological_minor_check(&c4, &host).is_none());
    }
}
