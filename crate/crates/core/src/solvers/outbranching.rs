use super::brute::smallest_subset;
use super::steiner::directed_steiner_outtree;
use super::{
    closed_out, spanning_outbranching, verify_dominating, DominationInstance, OutBranching, SolveError,
    SolveOutcome, Variant, Witness,
};
use crate::graph::{Digraph, VertexSet};
use crate::quasiwide::compute_scattered;

/// Largest target set handled by partition enumeration.
pub const BOUNDED_MAX_W: usize = 12;
/// Largest number of extra vertices handled by partition enumeration.
pub const BOUNDED_MAX_J: usize = 4;

/// Dominating out-branching with at most `k` vertices.
pub fn dominating_outbranching(g: &Digraph, k: usize, scatter_budget: usize) -> SolveOutcome {
    solve_dob(&DominationInstance::new(g.clone(), k), scatter_budget)
}

/// Extends `us` by at most `j` vertices outside `y` so that the extension
/// dominates `w` and the whole set spans an out-branching; the returned tree
/// covers `us` and the extension.
///
/// Each partition of `w` into at most `j` blocks with a common dominator gets an
/// auxiliary sink per block, fed by every dominator of that block; a Steiner
/// out-tree over `us` and the sinks then has at most `|us| + j + blocks` vertices.
pub fn dominating_outbranching_bounded(
    g: &Digraph,
    us: &[usize],
    w: &VertexSet,
    j: usize,
    y: &VertexSet,
) -> Result<Option<OutBranching>, SolveError> {
    if w.len() > BOUNDED_MAX_W || j > BOUNDED_MAX_J {
        return Err(SolveError::TooLarge(format!("|W| = {}, j = {j}", w.len())));
    }
    w.check_in(g)?;
    let base: VertexSet = us.iter().copied().collect();
    base.check_in(g)?;
    if base.len() != us.len() || !base.is_disjoint(y) {
        return Err(SolveError::Invalid("extension base must be distinct and allowed".into()));
    }
    if base.is_empty() && w.is_empty() {
        return Err(SolveError::Invalid("nothing to connect or dominate".into()));
    }
    let n = g.n();
    let dominators: Vec<VertexSet> = w
        .iter()
        .map(|x| {
            let mut s: VertexSet = g.in_neighbors(x).iter().copied().collect();
            s.insert(x);
            s.difference(y)
        })
        .collect();
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut found = None;
    partitions(&dominators, 0, j, &mut blocks, &mut |blocks| {
        let b = blocks.len();
        let mut edges: Vec<(usize, usize)> =
            g.edges().filter(|&(a, c)| !y.contains(a) && !y.contains(c)).collect();
        for (i, x) in blocks.iter().enumerate() {
            edges.extend(x.iter().map(|v| (v, n + i)));
        }
        let aux = Digraph::from_edges(n + b, edges).expect("auxiliary graph is simple");
        let terminals: VertexSet = us.iter().copied().chain(n..n + b).collect();
        let roots: VertexSet = (0..n).filter(|&v| !y.contains(v)).collect();
        let tree = directed_steiner_outtree(&aux, &terminals, Some(us.len() + j + b), &roots)?;
        let vertices: VertexSet = tree.vertices.iter().filter(|&v| v < n).collect();
        let parent = tree.edges.iter().filter(|&&(_, c)| c < n).map(|&(p, c)| (c, p)).collect();
        found = Some(OutBranching { root: tree.root, vertices, parent });
        Some(())
    });
    Ok(found)
}

/// Assigns each target to an open block whose common dominators it keeps
/// nonempty, or to a new block, in restricted-growth order.
fn partitions(
    dominators: &[VertexSet],
    i: usize,
    j: usize,
    blocks: &mut Vec<VertexSet>,
    visit: &mut dyn FnMut(&[VertexSet]) -> Option<()>,
) -> bool {
    if i == dominators.len() {
        return visit(blocks).is_some();
    }
    for b in 0..blocks.len() {
        let meet = blocks[b].intersection(&dominators[i]);
        if meet.is_empty() {
            continue;
        }
        let old = std::mem::replace(&mut blocks[b], meet);
        if partitions(dominators, i + 1, j, blocks, visit) {
            return true;
        }
        blocks[b] = old;
    }
    if blocks.len() < j && !dominators[i].is_empty() {
        blocks.push(dominators[i].clone());
        if partitions(dominators, i + 1, j, blocks, visit) {
            return true;
        }
        blocks.pop();
    }
    false
}

pub(crate) fn solve_dob(inst: &DominationInstance, budget: usize) -> SolveOutcome {
    let mut exhausted = false;
    let mut us = Vec::new();
    let found = if inst.w.is_empty() {
        Some(None)
    } else {
        dob_rec(&inst.graph, &mut us, inst.w.clone(), inst.k, &inst.y, budget, &mut exhausted).map(Some)
    };
    let out = match found {
        Some(Some(t)) => SolveOutcome::found(Witness::Branching(t), exhausted),
        Some(None) => SolveOutcome::found(Witness::Set(VertexSet::new()), exhausted),
        None => return SolveOutcome::infeasible(exhausted),
    };
    assert!(out.certifies(inst, Variant::OutBranching), "solver witness failed verification");
    out
}

/// `us` is the fixed part, `w` what is still undominated and `j` the number of
/// vertices still to add.
fn dob_rec(
    g: &Digraph,
    us: &mut Vec<usize>,
    w: VertexSet,
    j: usize,
    y: &VertexSet,
    budget: usize,
    exh: &mut bool,
) -> Option<OutBranching> {
    if w.len() <= BOUNDED_MAX_W && j <= BOUNDED_MAX_J {
        return dominating_outbranching_bounded(g, us, &w, j, y).expect("within partition caps");
    }
    if j == 0 {
        return None;
    }
    let fixed: VertexSet = us.iter().copied().collect();
    let witness = (w.len() > j).then(|| compute_scattered(g, &w, 1, j + 1, budget).ok().flatten()).flatten();
    let Some(wit) = witness else {
        *exh = true;
        let cands: Vec<usize> = (0..g.n()).filter(|&v| !y.contains(v) && !fixed.contains(v)).collect();
        let ext = smallest_subset(&cands, 0..=j.min(cands.len()), |s| {
            let all = s.union(&fixed);
            verify_dominating(g, s, 1, &w) && !all.is_empty() && spanning_outbranching(g, &all).is_some()
        })?;
        return spanning_outbranching(g, &ext.union(&fixed));
    };
    for s in wit.deleted.difference(y).difference(&fixed).iter() {
        us.push(s);
        let found = dob_rec(g, us, w.difference(&closed_out(g, s)), j - 1, y, budget, exh);
        us.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{crown, random_digraph};
    use crate::graph::UndirectedGraph;
    use crate::solvers::brute_force_solve;

    fn star(leaves: usize) -> Digraph {
        let u = UndirectedGraph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap();
        u.bidirect()
    }

    #[test]
    fn bounded_examples() {
        let g = Digraph::from_edges(4, [(0, 1), (0, 2), (3, 0)]).unwrap();
        let t = dominating_outbranching_bounded(&g, &[], &VertexSet::from(vec![1, 2]), 1, &VertexSet::new())
            .unwrap()
            .unwrap();
        assert_eq!(t.vertices, VertexSet::singleton(0));
        let s = star(4);
        let t = dominating_outbranching_bounded(&s, &[], &VertexSet::from(vec![1, 2, 3, 4]), 1, &VertexSet::new())
            .unwrap()
            .unwrap();
        assert_eq!(t.vertices, VertexSet::singleton(0));
        let c = crown(3).unwrap().graph;
        let all = VertexSet::range(c.n());
        for j in 0..=4 {
            assert!(dominating_outbranching_bounded(&c, &[], &all, j, &VertexSet::new()).unwrap().is_none());
        }
    }

    #[test]
    fn solver_examples() {
        assert!(dominating_outbranching(&star(5), 1, 4).feasible);
        let c = crown(3).unwrap().graph;
        for k in 0..=6 {
            assert!(!dominating_outbranching(&c, k, 4).feasible);
        }
        let p = Digraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(dominating_outbranching(&p, 4, 4).feasible);
        assert!(!dominating_outbranching(&p, 3, 4).feasible);
    }

    #[test]
    fn agrees_with_oracle() {
        for seed in 0..30 {
            let g = random_digraph(10, 0.3, seed);
            for k in 0..5 {
                let inst = DominationInstance::new(g.clone(), k);
                let want = brute_force_solve(&inst, Variant::OutBranching).unwrap().feasible;
                assert_eq!(solve_dob(&inst, 3).feasible, want, "seed {seed} k {k}");
            }
        }
    }
}
