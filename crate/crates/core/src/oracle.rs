//! Exhaustive reference implementations used to cross-check the search routines.
//! They share no code with the searches they check beyond graph primitives.

use crate::graph::{Digraph, Direction, UndirectedGraph, VertexSet};
use crate::minors::IntervalPartition;

/// Hosts above this size are refused by the branch-set oracles.
pub const ORACLE_MAX_VERTICES: usize = 12;

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

/// Terminal choice for one branch set: `ins` receive pattern edges, `outs` send them,
/// `reach` is the out-neighbourhood of `outs` in the host.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Pair {
    ins: u32,
    outs: u32,
    reach: u32,
}

/// Maximal terminal pairs of `G[set]`: every in-terminal reaches every
/// out-terminal, one vertex reaches all outs and one is reached from all ins,
/// all within `depth` when given.
fn branch_pairs(g: &Digraph, out_mask: &[u32], set: u32, depth: Option<usize>) -> Vec<Pair> {
    let allowed: Vec<bool> = (0..g.n()).map(|v| set >> v & 1 == 1).collect();
    let ball = |v: usize, dir: Direction| -> u32 {
        g.bfs(&[v], dir, depth, Some(&allowed)).iter().enumerate().filter(|(_, d)| d.is_some()).fold(0, |m, (w, _)| m | 1 << w)
    };
    let members: Vec<usize> = bits(set).collect();
    let fwd: Vec<u32> = members.iter().map(|&v| ball(v, Direction::Out)).collect();
    let bwd: Vec<u32> = members.iter().map(|&v| ball(v, Direction::In)).collect();
    let mut pairs = Vec::new();
    let mut ins = set;
    loop {
        if ins == 0 || bwd.iter().any(|&b| ins & b == ins) {
            let common = members.iter().zip(&fwd).filter(|(&v, _)| ins >> v & 1 == 1).fold(set, |m, (_, &f)| m & f);
            for &f in &fwd {
                pairs.push((ins, common & f));
            }
        }
        if ins == 0 {
            break;
        }
        ins = (ins - 1) & set;
    }
    pairs.sort_unstable();
    pairs.dedup();
    let maximal: Vec<(u32, u32)> = pairs
        .iter()
        .copied()
        .filter(|&(i, o)| !pairs.iter().any(|&(i2, o2)| (i2, o2) != (i, o) && i & i2 == i && o & o2 == o))
        .collect();
    maximal
        .into_iter()
        .map(|(ins, outs)| Pair { ins, outs, reach: bits(outs).fold(0, |m, v| m | out_mask[v]) })
        .collect()
}

/// Whether `pattern` has a directed model in `host` (depth-bounded when `depth` is
/// given), by enumerating disjoint branch sets and their terminal pairs.
pub fn directed_minor_oracle(pattern: &Digraph, host: &Digraph, depth: Option<usize>) -> Option<bool> {
    let n = host.n();
    if n > ORACLE_MAX_VERTICES {
        return None;
    }
    if pattern.n() > n {
        return Some(false);
    }
    let out_mask: Vec<u32> = (0..n).map(|v| host.out_neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let mut cache: Vec<Option<Vec<Pair>>> = vec![None; 1 << n];
    let mut order: Vec<usize> = (0..pattern.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(pattern.out_degree(v) + pattern.in_degree(v)));
    let mut chosen: Vec<Option<Pair>> = vec![None; pattern.n()];
    let mut ctx = DirCtx { pattern, host, out_mask, depth, order, full: (1u32 << n) - 1 };
    Some(place(&mut ctx, &mut cache, 0, 0, &mut chosen))
}

struct DirCtx<'a> {
    pattern: &'a Digraph,
    host: &'a Digraph,
    out_mask: Vec<u32>,
    depth: Option<usize>,
    order: Vec<usize>,
    full: u32,
}

fn place(ctx: &mut DirCtx, cache: &mut [Option<Vec<Pair>>], idx: usize, used: u32, chosen: &mut [Option<Pair>]) -> bool {
    if idx == ctx.order.len() {
        return true;
    }
    let v = ctx.order[idx];
    let free = ctx.full & !used;
    let mut set = free;
    while set != 0 {
        if cache[set as usize].is_none() {
            cache[set as usize] = Some(branch_pairs(ctx.host, &ctx.out_mask, set, ctx.depth));
        }
        let pairs = cache[set as usize].clone().unwrap();
        for p in pairs {
            let fits = ctx.pattern.out_neighbors(v).iter().all(|&w| chosen[w].is_none_or(|q| p.reach & q.ins != 0))
                && ctx.pattern.in_neighbors(v).iter().all(|&w| chosen[w].is_none_or(|q| q.reach & p.ins != 0));
            if !fits {
                continue;
            }
            chosen[v] = Some(p);
            if place(ctx, cache, idx + 1, used | set, chosen) {
                return true;
            }
            chosen[v] = None;
        }
        set = (set - 1) & free;
    }
    false
}

/// Whether `pattern` is a minor of `host` as undirected graphs: disjoint connected
/// branch sets with a host edge for every pattern edge.
pub fn undirected_minor_oracle(pattern: &UndirectedGraph, host: &UndirectedGraph) -> Option<bool> {
    let n = host.n();
    if n > ORACLE_MAX_VERTICES {
        return None;
    }
    if pattern.n() > n {
        return Some(false);
    }
    let adj: Vec<u32> = (0..n).map(|v| host.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let connected: Vec<bool> = (0..1u32 << n)
        .map(|set| {
            if set == 0 {
                return false;
            }
            let mut seen = set & set.wrapping_neg();
            loop {
                let next = bits(seen).fold(seen, |m, v| m | (adj[v] & set));
                if next == seen {
                    return seen == set;
                }
                seen = next;
            }
        })
        .collect();
    let mut sets: Vec<u32> = vec![0; pattern.n()];
    Some(place_undirected(pattern, &adj, &connected, (1u32 << n) - 1, 0, 0, &mut sets))
}

fn place_undirected(
    pattern: &UndirectedGraph,
    adj: &[u32],
    connected: &[bool],
    full: u32,
    v: usize,
    used: u32,
    sets: &mut [u32],
) -> bool {
    if v == pattern.n() {
        return true;
    }
    let free = full & !used;
    let mut set = free;
    while set != 0 {
        if connected[set as usize] {
            let nb = bits(set).fold(0, |m, x| m | adj[x]);
            if pattern.neighbors(v).iter().filter(|&&w| w < v).all(|&w| nb & sets[w] != 0) {
                sets[v] = set;
                if place_undirected(pattern, adj, connected, full, v + 1, used | set, sets) {
                    return true;
                }
            }
        }
        set = (set - 1) & free;
    }
    false
}

/// Simple `s -> t` paths of at most `bound` edges, as vertex masks.
fn all_paths(g: &Digraph, s: usize, t: usize, bound: Option<usize>) -> Vec<u64> {
    fn walk(g: &Digraph, v: usize, t: usize, left: Option<usize>, mask: u64, out: &mut Vec<u64>) {
        if v == t {
            out.push(mask);
            return;
        }
        if left == Some(0) {
            return;
        }
        for &w in g.out_neighbors(v) {
            if mask >> w & 1 == 0 {
                walk(g, w, t, left.map(|l| l - 1), mask | 1 << w, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(g, s, t, bound, 1 << s, &mut out);
    out
}

/// Whether paths `s_i -> t_i` exist with paths from different intervals vertex-disjoint,
/// by enumerating every tuple of simple paths.
pub fn disjoint_paths_oracle(
    g: &Digraph,
    pairs: &[(usize, usize)],
    part: &IntervalPartition,
    bound: Option<usize>,
) -> Option<bool> {
    if g.n() > 64 || part.k() != pairs.len() {
        return None;
    }
    let options: Vec<Vec<u64>> = pairs.iter().map(|&(s, t)| all_paths(g, s, t, bound)).collect();
    fn pick(options: &[Vec<u64>], part: &IntervalPartition, i: usize, chosen: &mut Vec<u64>) -> bool {
        if i == options.len() {
            return true;
        }
        for &p in &options[i] {
            let clash = chosen.iter().enumerate().any(|(j, &q)| part.interval_of(j) != part.interval_of(i) && p & q != 0);
            if clash {
                continue;
            }
            chosen.push(p);
            if pick(options, part, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    Some(pick(&options, part, 0, &mut Vec::new()))
}

/// Fewest vertices of an out-tree containing `terminals` with its root in `roots`
/// (anywhere when empty): the least vertex set in which some allowed root reaches
/// everything.
pub fn min_outtree_oracle(g: &Digraph, terminals: &VertexSet, roots: &VertexSet) -> Option<usize> {
    let n = g.n();
    if n > 20 {
        return None;
    }
    let need = terminals.iter().fold(0u32, |m, v| m | 1 << v);
    (1u32..1 << n)
        .filter(|&s| s & need == need)
        .filter(|&s| {
            let allowed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
            bits(s).filter(|&r| roots.is_empty() || roots.contains(r)).any(|r| {
                let d = g.bfs(&[r], Direction::Out, None, Some(&allowed));
                bits(s).all(|v| d[v].is_some())
            })
        })
        .map(|s| s.count_ones() as usize)
        .min()
}

/// `X` `d`-dominates `W` iff it `d`-dominates `W - w`, for every `X` of size at most `k`.
pub fn irrelevance_holds(g: &Digraph, w: &VertexSet, x: usize, k: usize, d: usize) -> bool {
    let n = g.n();
    let balls: Vec<Vec<bool>> = (0..n)
        .map(|v| g.bfs(&[v], Direction::Out, Some(d), None).iter().map(Option::is_some).collect())
        .collect();
    let rest: Vec<usize> = w.iter().filter(|&v| v != x).collect();
    let mut idx: Vec<usize> = Vec::new();
    for size in 0..=k.min(n) {
        idx.clear();
        idx.extend(0..size);
        loop {
            let hit = |t: usize| idx.iter().any(|&v| balls[v][t]);
            let full = w.iter().all(hit);
            let reduced = rest.iter().all(|&t| hit(t));
            if full != reduced {
                return false;
            }
            if !crate::numeric::next_combination(&mut idx, n) {
                break;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{crown, reversed_crown};

    #[test]
    fn crowns() {
        let s3 = crown(3).unwrap().graph;
        let s2 = crown(2).unwrap().graph;
        assert_eq!(directed_minor_oracle(&s2, &s3, Some(0)), Some(true));
        // Three principals of a reversed crown act as connectors of a crown.
        let rc = reversed_crown(4).unwrap().graph;
        assert_eq!(directed_minor_oracle(&s3, &rc, Some(0)), Some(true));
        let s4 = crown(4).unwrap().graph;
        assert_eq!(directed_minor_oracle(&s4, &rc, None), Some(false));
    }

    #[test]
    fn depth_matters() {
        let path = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let edge = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let two = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(directed_minor_oracle(&edge, &path, Some(0)), Some(true));
        assert_eq!(directed_minor_oracle(&two, &path, Some(0)), Some(true));
        let cyc = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(directed_minor_oracle(&cyc, &path, None), Some(false));
        let c4 = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(directed_minor_oracle(&cyc, &c4, Some(1)), Some(true));
        assert_eq!(directed_minor_oracle(&cyc, &c4, Some(0)), Some(false));
    }

    #[test]
    fn undirected_k4_in_cube_fails() {
        let k4 = UndirectedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c4 = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let k3 = UndirectedGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(undirected_minor_oracle(&k3, &c4), Some(true));
        assert_eq!(undirected_minor_oracle(&k4, &c4), Some(false));
    }

    #[test]
    fn paths_and_trees() {
        let g = Digraph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        let pairs = [(0, 3), (0, 3)];
        assert_eq!(disjoint_paths_oracle(&g, &pairs, &IntervalPartition::whole(2), None), Some(true));
        assert_eq!(disjoint_paths_oracle(&g, &pairs, &IntervalPartition::singletons(2), None), Some(false));
        assert_eq!(min_outtree_oracle(&g, &VertexSet::from(vec![1, 2]), &VertexSet::new()), Some(3));
        assert_eq!(min_outtree_oracle(&g, &VertexSet::from(vec![1, 2]), &VertexSet::singleton(1)), None);
    }

    #[test]
    fn irrelevance_contract() {
        let g = Digraph::from_edges(4, [(0, 2), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert!(irrelevance_holds(&g, &VertexSet::from(vec![2, 3]), 2, 2, 1));
        assert!(!irrelevance_holds(&g, &VertexSet::from(vec![2, 3]), 3, 2, 1));
    }
}
