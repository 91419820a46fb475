use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::model::{is_valid_model, BranchSet, DirectedModel};
use super::search::general_minor_check;
use super::MinorError;
use crate::graph::{Digraph, VertexSet};
use crate::iso::{canonical_form, find_subgraph_embedding, verify_subgraph_embedding, CanonicalForm};

/// Largest host accepted by the exhaustive butterfly search.
pub const BUTTERFLY_MAX_VERTICES: usize = 12;

/// Contracts `uv` (legal when `u` has out-degree 1 or `v` has in-degree 1). The merged
/// vertex takes the smaller id; ids above the larger one shift down by one.
pub fn butterfly_contract(g: &Digraph, (u, v): (usize, usize)) -> Result<Digraph, MinorError> {
    if !g.has_edge(u, v) || !(g.out_degree(u) == 1 || g.in_degree(v) == 1) {
        return Err(MinorError::IllegalContraction(u, v));
    }
    Ok(merge(g, u, v))
}

fn merge(g: &Digraph, u: usize, v: usize) -> Digraph {
    let (keep, gone) = (u.min(v), u.max(v));
    let map = |x: usize| {
        let x = if x == gone { keep } else { x };
        if x > gone {
            x - 1
        } else {
            x
        }
    };
    let edges: Vec<(usize, usize)> =
        g.edges().map(|(a, b)| (map(a), map(b))).filter(|(a, b)| a != b).collect();
    Digraph::from_edges_dedup(g.n() - 1, edges).expect("contraction stays in range")
}

fn delete_edges(g: &Digraph, del: &[(usize, usize)]) -> Digraph {
    Digraph::from_edges(g.n(), g.edges().filter(|e| !del.contains(e))).unwrap()
}

/// Edge deletions followed by one legal contraction, in the current labelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyStep {
    pub deleted: Vec<(usize, usize)>,
    pub contracted: (usize, usize),
}

/// Steps leading to a graph that contains the pattern via `embedding`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyWitness {
    pub steps: Vec<ButterflyStep>,
    pub embedding: Vec<usize>,
}

/// Replays a witness and checks the final embedding.
pub fn replay_butterfly(pattern: &Digraph, host: &Digraph, w: &ButterflyWitness) -> bool {
    let mut g = host.clone();
    for step in &w.steps {
        if step.deleted.iter().any(|&(a, b)| !g.has_edge(a, b)) {
            return false;
        }
        g = delete_edges(&g, &step.deleted);
        match butterfly_contract(&g, step.contracted) {
            Ok(next) => g = next,
            Err(_) => return false,
        }
    }
    verify_subgraph_embedding(pattern, &g, &w.embedding)
}

/// Exhaustive search over contraction sequences; deletions are only made where
/// they unblock a contraction, the rest is left to the final subgraph test.
pub fn butterfly_search(pattern: &Digraph, host: &Digraph) -> Result<Option<ButterflyWitness>, MinorError> {
    if host.n() > BUTTERFLY_MAX_VERTICES {
        return Err(MinorError::TooLarge(format!("{} vertices", host.n())));
    }
    let mut seen = HashSet::new();
    let mut steps = Vec::new();
    Ok(dfs(pattern, host, &mut seen, &mut steps).map(|embedding| ButterflyWitness { steps, embedding }))
}

pub fn is_butterfly_minor(pattern: &Digraph, host: &Digraph) -> Result<bool, MinorError> {
    Ok(butterfly_search(pattern, host)?.is_some())
}

fn dfs(
    h: &Digraph,
    g: &Digraph,
    seen: &mut HashSet<CanonicalForm>,
    steps: &mut Vec<ButterflyStep>,
) -> Option<Vec<usize>> {
    if let Some(m) = find_subgraph_embedding(h, g) {
        return Some(m);
    }
    if g.n() <= h.n() || !seen.insert(canonical_form(g)) {
        return None;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for &(u, v) in &edges {
        let mut moves: Vec<Vec<(usize, usize)>> = Vec::new();
        if g.in_degree(v) > 1 || g.out_degree(u) == 1 {
            moves.push(g.out_neighbors(u).iter().filter(|&&x| x != v).map(|&x| (u, x)).collect());
        }
        if g.out_degree(u) > 1 {
            moves.push(g.in_neighbors(v).iter().filter(|&&x| x != u).map(|&x| (x, v)).collect());
        }
        for deleted in moves {
            let next = merge(&delete_edges(g, &deleted), u, v);
            if next.edge_count() < h.edge_count() {
                continue;
            }
            steps.push(ButterflyStep { deleted, contracted: (u, v) });
            if let Some(m) = dfs(h, &next, seen, steps) {
                return Some(m);
            }
            steps.pop();
        }
    }
    None
}

/// Both minor relations for a directed-bipartite pattern, and whether the directed
/// model could be rebuilt with out-branchings (sources) and in-branchings (sinks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteEquivalence {
    pub directed: bool,
    pub butterfly: bool,
    pub branching_model: Option<DirectedModel>,
}

impl BipartiteEquivalence {
    pub fn agrees(&self) -> bool {
        self.directed == self.butterfly && self.directed == self.branching_model.is_some()
    }
}

pub fn bipartite_minor_equiv_check(pattern: &Digraph, host: &Digraph) -> Result<BipartiteEquivalence, MinorError> {
    if !pattern.is_directed_bipartite() {
        return Err(MinorError::NotBipartite);
    }
    let butterfly = is_butterfly_minor(pattern, host)?;
    let model = general_minor_check(pattern, host);
    let branching_model = model.as_ref().and_then(|m| to_branchings(pattern, host, m));
    Ok(BipartiteEquivalence { directed: model.is_some(), butterfly, branching_model })
}

/// Shrinks every branch to a tree: an out-branching from the source covering the
/// out-terminals, or an in-branching into the sink covering the in-terminals.
fn to_branchings(pattern: &Digraph, host: &Digraph, m: &DirectedModel) -> Option<DirectedModel> {
    let (ins, outs) = m.terminals(pattern);
    let branches = m
        .branches
        .iter()
        .enumerate()
        .map(|(v, b)| {
            if ins[v].is_empty() {
                tree(&b.edges, b.source, &outs[v], false)
            } else {
                tree(&b.edges, b.sink, &ins[v], true)
            }
        })
        .collect::<Option<Vec<BranchSet>>>()?;
    let out = DirectedModel { branches, edge_images: m.edge_images.clone(), depth: None };
    is_valid_model(pattern, host, &out).then_some(out)
}

fn tree(edges: &[(usize, usize)], root: usize, needed: &VertexSet, toward_root: bool) -> Option<BranchSet> {
    let mut parent: Vec<(usize, usize)> = vec![(root, root)];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(a, b) in edges {
            let (from, to) = if toward_root { (b, a) } else { (a, b) };
            if from == x && !parent.iter().any(|&(c, _)| c == to) {
                parent.push((to, x));
                queue.push_back(to);
            }
        }
    }
    let mut keep: Vec<usize> = vec![root];
    let mut tree_edges = Vec::new();
    for t in needed.iter() {
        let mut cur = t;
        while cur != root {
            let &(_, p) = parent.iter().find(|&&(c, _)| c == cur)?;
            if !keep.contains(&cur) {
                keep.push(cur);
                tree_edges.push(if toward_root { (cur, p) } else { (p, cur) });
            }
            cur = p;
        }
    }
    tree_edges.sort_unstable();
    tree_edges.dedup();
    Some(BranchSet { vertices: keep.into_iter().collect(), edges: tree_edges, source: root, sink: root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{crown, reversed_crown};

    #[test]
    fn contract_middle_of_path() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let c = butterfly_contract(&g, (1, 2)).unwrap();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(c.n(), 2);
    }

    #[test]
    fn illegal_contraction() {
        let g = Digraph::from_edges(4, [(0, 1), (0, 2), (3, 1)]).unwrap();
        assert_eq!(butterfly_contract(&g, (0, 1)), Err(MinorError::IllegalContraction(0, 1)));
        assert!(butterfly_contract(&g, (1, 0)).is_err());
    }

    #[test]
    fn subdivided_edge_contracts() {
        let g = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let w = butterfly_search(&h, &g).unwrap().unwrap();
        assert!(replay_butterfly(&h, &g, &w));
        let two = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(!is_butterfly_minor(&two, &g).unwrap());
    }

    #[test]
    fn bowtie_separates_the_relations() {
        // Pattern p1, p2 -> x -> q1, q2; host has a 2x2 complete bipartite middle.
        let h = Digraph::from_edges(5, [(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        let g = Digraph::from_edges(
            8,
            [(0, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 6), (5, 7)],
        )
        .unwrap();
        assert!(general_minor_check(&h, &g).is_some());
        assert!(!is_butterfly_minor(&h, &g).unwrap());
    }

    #[test]
    fn bipartite_patterns_agree() {
        let s2 = crown(2).unwrap().graph;
        let rc = reversed_crown(3).unwrap().graph;
        for host in [crown(3).unwrap().graph, rc.clone()] {
            for pat in [s2.clone(), rc.clone()] {
                let r = bipartite_minor_equiv_check(&pat, &host).unwrap();
                assert!(r.agrees(), "{r:?}");
            }
        }
        let p2 = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(bipartite_minor_equiv_check(&p2, &rc), Err(MinorError::NotBipartite));
    }
}
