use std::collections::HashMap;

use num_rational::Ratio;

use super::model::{is_valid_model, BranchSet, DirectedModel};
use super::MinorError;
use crate::graph::{Digraph, Direction, VertexSet};

/// Largest host accepted by [`grad`].
pub const GRAD_MAX_VERTICES: usize = 10;

/// A branch candidate: vertex set `set`, in-terminal set `ins` and out-terminal set
/// `outs`, with every in-terminal reaching every out-terminal within depth inside `set`.
#[derive(Clone, Copy)]
struct Gadget {
    set: u32,
    ins: u32,
    outs: u32,
    reach: u32,
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

fn to_set(mask: u32) -> VertexSet {
    bits(mask).collect()
}

/// Greatest edge density `|E(H)| / |V(H)|` over depth-`r` directed minors `H` of `g`.
///
/// Terminal sets only shrink when pattern edges are dropped, so each branch is
/// described by a maximal pair of terminal sets closed under mutual reachability.
pub fn grad(g: &Digraph, r: usize) -> Result<Ratio<u64>, MinorError> {
    Ok(densest_minor(g, r)?.0)
}

/// [`grad`] together with a verified witness pattern and model.
pub fn densest_minor(g: &Digraph, r: usize) -> Result<(Ratio<u64>, Digraph, DirectedModel), MinorError> {
    let n = g.n();
    if n > GRAD_MAX_VERTICES {
        return Err(MinorError::TooLarge(format!("{n} vertices")));
    }
    let gadgets = gadgets(g, r);
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, gd) in gadgets.iter().enumerate() {
        by_min[gd.set.trailing_zeros() as usize].push(i);
    }
    let mut best = Best { value: Ratio::from_integer(0), chosen: Vec::new() };
    let mut chosen = Vec::new();
    pack(&gadgets, &by_min, 0, 0, &mut chosen, 0, &mut best);

    let (pattern, model) = witness(g, r, &gadgets, &best.chosen);
    assert!(is_valid_model(&pattern, g, &model), "densest minor witness failed verification");
    Ok((best.value, pattern, model))
}

struct Best {
    value: Ratio<u64>,
    chosen: Vec<usize>,
}

fn pack(
    gadgets: &[Gadget],
    by_min: &[Vec<usize>],
    v: usize,
    used: u32,
    chosen: &mut Vec<usize>,
    edges: u64,
    best: &mut Best,
) {
    if !chosen.is_empty() {
        let d = Ratio::new(edges, chosen.len() as u64);
        if d > best.value {
            best.value = d;
            best.chosen = chosen.clone();
        }
    }
    let Some(v) = (v..by_min.len()).find(|&x| used >> x & 1 == 0) else {
        return;
    };
    pack(gadgets, by_min, v + 1, used | 1 << v, chosen, edges, best);
    for &i in &by_min[v] {
        let gd = gadgets[i];
        if gd.set & used != 0 {
            continue;
        }
        let added: u64 = chosen
            .iter()
            .map(|&j| {
                let o = gadgets[j];
                u64::from(o.reach & gd.ins != 0) + u64::from(gd.reach & o.ins != 0)
            })
            .sum();
        chosen.push(i);
        pack(gadgets, by_min, v + 1, used | gd.set, chosen, edges + added, best);
        chosen.pop();
    }
}

fn gadgets(g: &Digraph, r: usize) -> Vec<Gadget> {
    let n = g.n();
    let out_mask: Vec<u32> = (0..n).map(|v| g.out_neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let mut minimal: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    let mut sets: Vec<u32> = (1..1u32 << n).collect();
    sets.sort_by_key(|s| s.count_ones());
    let mut out = Vec::new();
    for set in sets {
        let keep: Vec<bool> = (0..n).map(|v| set >> v & 1 == 1).collect();
        let ball = |v: usize, dir: Direction| -> u32 {
            g.bfs(&[v], dir, Some(r), Some(&keep))
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .fold(0, |m, (w, _)| m | 1 << w)
        };
        let fwd: Vec<u32> = (0..n).map(|v| if keep[v] { ball(v, Direction::Out) } else { 0 }).collect();
        let bwd: Vec<u32> = (0..n).map(|v| if keep[v] { ball(v, Direction::In) } else { 0 }).collect();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut sub = set;
        while sub != 0 {
            let outs = bits(sub).fold(set, |m, v| m & fwd[v]);
            if outs != 0 {
                let ins = bits(outs).fold(set, |m, v| m & bwd[v]);
                pairs.push((ins, outs));
            }
            sub = (sub - 1) & set;
        }
        pairs.sort_unstable();
        pairs.dedup();
        for (ins, outs) in pairs {
            let smaller = minimal.entry((ins, outs)).or_default();
            if smaller.iter().any(|&s| s & set == s) {
                continue;
            }
            smaller.push(set);
            let reach = bits(outs).fold(0, |m, v| m | out_mask[v]);
            out.push(Gadget { set, ins, outs, reach });
        }
    }
    out
}

fn witness(g: &Digraph, r: usize, gadgets: &[Gadget], chosen: &[usize]) -> (Digraph, DirectedModel) {
    let k = chosen.len();
    let mut pairs = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let (x, y) = (gadgets[chosen[a]], gadgets[chosen[b]]);
            if a != b && x.reach & y.ins != 0 {
                pairs.push((a, b));
            }
        }
    }
    let pattern = Digraph::from_edges(k, pairs).expect("distinct pattern edges");
    let edge_images = pattern
        .edges()
        .map(|(a, b)| {
            let (x, y) = (gadgets[chosen[a]], gadgets[chosen[b]]);
            bits(x.outs)
                .find_map(|u| g.out_neighbors(u).iter().find(|&&w| y.ins >> w & 1 == 1).map(|&w| (u, w)))
                .expect("adjacent gadgets")
        })
        .collect();
    let branches = chosen
        .iter()
        .map(|&i| {
            let gd = gadgets[i];
            let s = gd.ins.trailing_zeros() as usize;
            let t = gd.outs.trailing_zeros() as usize;
            BranchSet::induced(g, to_set(gd.set), s, t)
        })
        .collect();
    (pattern, DirectedModel { branches, edge_images, depth: Some(r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{crown, random_digraph};

    #[test]
    fn single_edge() {
        let g = Digraph::from_edges(2, [(0, 1)]).unwrap();
        for r in 0..3 {
            assert_eq!(grad(&g, r).unwrap(), Ratio::new(1, 2));
        }
    }

    #[test]
    fn crown_at_depth_zero() {
        let s3 = crown(3).unwrap().graph;
        assert_eq!(grad(&s3, 0).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn three_cycle() {
        let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(grad(&c3, 0).unwrap(), Ratio::from_integer(1));
        assert_eq!(grad(&c3, 1).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn nondecreasing_in_depth() {
        for seed in 0..6 {
            let g = random_digraph(7, 0.3, seed);
            let vals: Vec<_> = (0..3).map(|r| grad(&g, r).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{vals:?}");
        }
    }

    #[test]
    fn rejects_large_hosts() {
        let g = Digraph::empty(11);
        assert!(matches!(grad(&g, 0), Err(MinorError::TooLarge(_))));
    }
}
