//! Subgraph embeddings, automorphisms and canonical forms for small digraphs.

use crate::graph::Digraph;

/// Order in which pattern vertices are matched: each next vertex has the most
/// already-ordered neighbours, then the largest degree.
fn matching_order(p: &Digraph) -> Vec<usize> {
    let n = p.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut links = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links[v], p.out_degree(v) + p.in_degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &w in p.out_neighbors(v).iter().chain(p.in_neighbors(v)) {
            links[w] += 1;
        }
    }
    order
}

struct Matcher<'a> {
    p: &'a Digraph,
    h: &'a Digraph,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn compatible(&self, pv: usize, hv: usize) -> bool {
        if self.used[hv]
            || self.h.out_degree(hv) < self.p.out_degree(pv)
            || self.h.in_degree(hv) < self.p.in_degree(pv)
        {
            return false;
        }
        self.p.out_neighbors(pv).iter().all(|&w| self.map[w] == usize::MAX || self.h.has_edge(hv, self.map[w]))
            && self.p.in_neighbors(pv).iter().all(|&w| self.map[w] == usize::MAX || self.h.has_edge(self.map[w], hv))
    }

    fn candidates(&self, pv: usize) -> Vec<usize> {
        if let Some(&w) = self.p.out_neighbors(pv).iter().find(|&&w| self.map[w] != usize::MAX) {
            return self.h.in_neighbors(self.map[w]).to_vec();
        }
        if let Some(&w) = self.p.in_neighbors(pv).iter().find(|&&w| self.map[w] != usize::MAX) {
            return self.h.out_neighbors(self.map[w]).to_vec();
        }
        (0..self.h.n()).collect()
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let pv = self.order[depth];
        for hv in self.candidates(pv) {
            if !self.compatible(pv, hv) {
                continue;
            }
            self.map[pv] = hv;
            self.used[hv] = true;
            let stop = self.run(depth + 1, visit);
            self.used[hv] = false;
            self.map[pv] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Calls `visit` on every injective edge-preserving map `pattern -> host` until it returns true.
pub fn visit_embeddings(pattern: &Digraph, host: &Digraph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if pattern.n() > host.n() || pattern.edge_count() > host.edge_count() {
        return;
    }
    let mut m = Matcher {
        p: pattern,
        h: host,
        order: matching_order(pattern),
        map: vec![usize::MAX; pattern.n()],
        used: vec![false; host.n()],
    };
    m.run(0, visit);
}

/// An injective map `phi` with `phi(u) phi(v)` a host edge for every pattern edge `uv`.
pub fn find_subgraph_embedding(pattern: &Digraph, host: &Digraph) -> Option<Vec<usize>> {
    let mut found = None;
    visit_embeddings(pattern, host, &mut |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

pub fn verify_subgraph_embedding(pattern: &Digraph, host: &Digraph, map: &[usize]) -> bool {
    let mut used = vec![false; host.n()];
    map.len() == pattern.n()
        && map.iter().all(|&v| v < host.n() && !std::mem::replace(&mut used[v], true))
        && pattern.edges().all(|(u, v)| host.has_edge(map[u], map[v]))
}

/// All automorphisms, as vertex permutations.
pub fn automorphisms(g: &Digraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    visit_embeddings(g, g, &mut |m| {
        out.push(m.to_vec());
        false
    });
    out
}

/// Relabelling-invariant form: the edge list under a canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn are_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

/// Canonical form by colour refinement with individualisation. Twins inside a cell
/// are individualised only once, since swapping them is an automorphism.
pub fn canonical_form(g: &Digraph) -> CanonicalForm {
    let colors = refine(g, vec![0; g.n()]);
    let mut best: Option<Vec<(usize, usize)>> = None;
    search(g, colors, &mut best);
    CanonicalForm { n: g.n(), edges: best.unwrap_or_default() }
}

fn refine(g: &Digraph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut o: Vec<usize> = g.out_neighbors(v).iter().map(|&w| colors[w]).collect();
                let mut i: Vec<usize> = g.in_neighbors(v).iter().map(|&w| colors[w]).collect();
                o.sort_unstable();
                i.sort_unstable();
                (colors[v], o, i)
            })
            .collect();
        let mut uniq: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| uniq.binary_search(&s).unwrap()).collect();
        let before = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
        let stable = uniq.len() == before;
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn are_twins(g: &Digraph, a: usize, b: usize) -> bool {
    let strip = |l: &[usize], x: usize| l.iter().copied().filter(|&w| w != x).collect::<Vec<_>>();
    strip(g.out_neighbors(a), b) == strip(g.out_neighbors(b), a)
        && strip(g.in_neighbors(a), b) == strip(g.in_neighbors(b), a)
        && g.has_edge(a, b) == g.has_edge(b, a)
}

fn search(g: &Digraph, colors: Vec<usize>, best: &mut Option<Vec<(usize, usize)>>) {
    let n = g.n();
    let mut counts = vec![0usize; n.max(1)];
    for &c in &colors {
        counts[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
        let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (colors[u], colors[v])).collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            *best = Some(edges);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let split: Vec<usize> = (0..n)
            .map(|w| if w == v { 2 * colors[w] } else { 2 * colors[w] + 1 })
            .collect();
        search(g, refine(g, split), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{crown, random_digraph, reversed_crown};

    #[test]
    fn crown_automorphisms() {
        for q in 1..5 {
            let c = crown(q).unwrap().graph;
            let fact: usize = (1..=q).product();
            assert_eq!(automorphisms(&c).len(), fact);
        }
    }

    #[test]
    fn crown_not_in_reversed_crown() {
        let s4 = crown(4).unwrap().graph;
        for q in 4..7 {
            assert!(find_subgraph_embedding(&s4, &reversed_crown(q).unwrap().graph).is_none());
        }
        let s5 = crown(5).unwrap().graph;
        let m = find_subgraph_embedding(&s4, &s5).unwrap();
        assert!(verify_subgraph_embedding(&s4, &s5, &m));
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        for seed in 0..40 {
            let g = random_digraph(7, 0.3, seed);
            let perm: Vec<usize> = (0..7).map(|i| (i * 3 + seed as usize) % 7).collect();
            let h = Digraph::from_edges(7, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
            assert_eq!(canonical_form(&g), canonical_form(&h));
            assert!(are_isomorphic(&g, &h));
        }
        let a = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let b = Digraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(!are_isomorphic(&a, &b));
        assert_eq!(canonical_form(&Digraph::empty(12)).edges.len(), 0);
    }
}
