use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, VertexSet};

/// Terminal sets larger than this are rejected.
pub const STEINER_MAX_TERMINALS: usize = 16;

/// Out-tree of `g` rooted at `root`; `edges` run away from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutTree {
    pub root: usize,
    pub vertices: VertexSet,
    pub edges: Vec<(usize, usize)>,
}

impl OutTree {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Edges exist in `g`, every vertex but the root has one parent, all reachable.
    pub fn verify(&self, g: &Digraph, terminals: &VertexSet) -> bool {
        let t = super::OutBranching {
            root: self.root,
            vertices: self.vertices.clone(),
            parent: self.edges.iter().map(|&(p, c)| (c, p)).collect(),
        };
        super::verify_outbranching(g, &t) && terminals.is_subset(&self.vertices)
    }
}

#[derive(Clone, Copy)]
enum Step {
    None,
    Leaf,
    Merge(u32),
    Extend(usize),
}

/// Out-tree with the fewest vertices containing `terminals`, rooted in `roots`
/// (anywhere when `roots` is empty), of size at most `size_budget` when given.
///
/// `cost[S][v]` is the least size of an out-tree rooted at `v` covering terminal
/// subset `S`; it is built by merging two trees at a shared root and by
/// prepending an edge `v -> w`.
pub fn directed_steiner_outtree(
    g: &Digraph,
    terminals: &VertexSet,
    size_budget: Option<usize>,
    roots: &VertexSet,
) -> Option<OutTree> {
    let n = g.n();
    if terminals.check_in(g).is_err() || roots.check_in(g).is_err() || terminals.len() > STEINER_MAX_TERMINALS {
        return None;
    }
    let allowed_root = |v: usize| roots.is_empty() || roots.contains(v);
    let ts: Vec<usize> = terminals.iter().collect();
    if ts.is_empty() {
        let root = (0..n).find(|&v| allowed_root(v))?;
        return (size_budget != Some(0)).then(|| OutTree { root, vertices: VertexSet::singleton(root), edges: vec![] });
    }
    let full: u32 = (1u32 << ts.len()) - 1;
    let inf = usize::MAX;
    let mut cost = vec![vec![inf; n]; full as usize + 1];
    let mut step = vec![vec![Step::None; n]; full as usize + 1];
    for (i, &t) in ts.iter().enumerate() {
        cost[1 << i][t] = 1;
        step[1 << i][t] = Step::Leaf;
    }
    for mask in 1..=full {
        let m = mask as usize;
        let mut sub = (mask - 1) & mask;
        while sub != 0 {
            let rest = mask ^ sub;
            if sub < rest {
                for v in 0..n {
                    let (a, b) = (cost[sub as usize][v], cost[rest as usize][v]);
                    if a != inf && b != inf && a + b - 1 < cost[m][v] {
                        cost[m][v] = a + b - 1;
                        step[m][v] = Step::Merge(sub);
                    }
                }
            }
            sub = (sub - 1) & mask;
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..n).filter(|&v| cost[m][v] != inf).map(|v| Reverse((cost[m][v], v))).collect();
        while let Some(Reverse((c, w))) = heap.pop() {
            if c > cost[m][w] {
                continue;
            }
            for &v in g.in_neighbors(w) {
                if c + 1 < cost[m][v] {
                    cost[m][v] = c + 1;
                    step[m][v] = Step::Extend(w);
                    heap.push(Reverse((c + 1, v)));
                }
            }
        }
    }
    let root = (0..n)
        .filter(|&v| allowed_root(v) && cost[full as usize][v] != inf)
        .min_by_key(|&v| (cost[full as usize][v], v))?;
    let best = cost[full as usize][root];
    if size_budget.is_some_and(|b| best > b) {
        return None;
    }
    let mut edges = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match step[mask as usize][v] {
            Step::Leaf | Step::None => {}
            Step::Merge(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Step::Extend(w) => {
                edges.push((v, w));
                stack.push((mask, w));
            }
        }
    }
    let tree = prune(n, root, &edges, terminals);
    debug_assert!(tree.size() == best);
    Some(tree)
}

/// BFS tree over the collected edges, cut back to the root-terminal paths.
fn prune(n: usize, root: usize, edges: &[(usize, usize)], terminals: &VertexSet) -> OutTree {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut keep = VertexSet::singleton(root);
    let mut tree_edges = Vec::new();
    for t in terminals.iter() {
        let mut cur = t;
        while cur != root && keep.insert(cur) {
            tree_edges.push((parent[cur], cur));
            cur = parent[cur];
        }
    }
    tree_edges.sort_unstable();
    OutTree { root, vertices: keep, edges: tree_edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_digraph;

    fn exhaustive_min(g: &Digraph, terminals: &VertexSet) -> Option<usize> {
        let n = g.n();
        (1u32..1 << n)
            .filter(|&s| terminals.iter().all(|t| s >> t & 1 == 1))
            .filter(|&s| {
                let set: VertexSet = (0..n).filter(|&v| s >> v & 1 == 1).collect();
                super::super::spanning_outbranching(g, &set).is_some()
            })
            .map(|s| s.count_ones() as usize)
            .min()
    }

    #[test]
    fn star_and_path() {
        let star = Digraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = directed_steiner_outtree(&star, &VertexSet::from(vec![1, 2, 3]), None, &VertexSet::new()).unwrap();
        assert_eq!((t.root, t.size()), (0, 4));
        let path = Digraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let t = directed_steiner_outtree(&path, &VertexSet::from(vec![0, 4]), None, &VertexSet::new()).unwrap();
        assert_eq!(t.size(), 5);
        assert!(t.verify(&path, &VertexSet::from(vec![0, 4])));
        assert!(directed_steiner_outtree(&path, &VertexSet::from(vec![0, 4]), Some(4), &VertexSet::new()).is_none());
    }

    #[test]
    fn disconnected_terminals() {
        let g = Digraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(directed_steiner_outtree(&g, &VertexSet::from(vec![1, 3]), None, &VertexSet::new()).is_none());
    }

    #[test]
    fn required_root() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let t = directed_steiner_outtree(&g, &VertexSet::from(vec![2]), None, &VertexSet::singleton(0)).unwrap();
        assert_eq!((t.root, t.size()), (0, 3));
    }

    #[test]
    fn matches_exhaustive() {
        for seed in 0..60 {
            let g = random_digraph(8, 0.3, seed);
            let terminals: VertexSet = (0..8).filter(|v| (seed as usize + v).is_multiple_of(3)).take(4).collect();
            let dp = directed_steiner_outtree(&g, &terminals, None, &VertexSet::new());
            if let Some(t) = &dp {
                assert!(t.verify(&g, &terminals));
            }
            assert_eq!(dp.map(|t| t.size()), exhaustive_min(&g, &terminals), "seed {seed}");
        }
    }
}
