use std::collections::BTreeMap;

use super::brute::smallest_subset;
use super::{
    closed_out, verify_dominating, verify_independent, DominationInstance, SolveOutcome, Variant, Witness,
};
use crate::graph::{Digraph, Direction, VertexSet};
use crate::quasiwide::compute_scattered;

/// Trace-class search handles targets up to this size.
const TRACE_MAX_TARGET: usize = 64;

/// Dominating set of size at most `k` (radius 1).
pub fn dominating_set(g: &Digraph, k: usize, scatter_budget: usize) -> SolveOutcome {
    solve_ds(&DominationInstance::new(g.clone(), k), scatter_budget)
}

/// Independent dominating set of size at most `k`.
pub fn independent_dominating_set(g: &Digraph, k: usize, scatter_budget: usize) -> SolveOutcome {
    solve_ids(&DominationInstance::new(g.clone(), k), scatter_budget)
}

/// `d`-dominating set of size at most `k`, after shrinking the target set.
pub fn d_dominating_set(g: &Digraph, k: usize, d: usize) -> SolveOutcome {
    solve_dds(&DominationInstance::new(g.clone(), k).with_radius(d))
}

fn fallback(
    g: &Digraph,
    w: &VertexSet,
    y: &VertexSet,
    k: usize,
    independent: bool,
    exhausted: &mut bool,
) -> Option<VertexSet> {
    *exhausted = true;
    let cands: Vec<usize> = (0..g.n()).filter(|&v| !y.contains(v)).collect();
    smallest_subset(&cands, 0..=k.min(cands.len()), |s| {
        verify_dominating(g, s, 1, w) && (!independent || verify_independent(g, s))
    })
}

/// Scattered branching step shared by both radius-1 solvers: `k + 1` members of
/// `w` that are 1-scattered outside `S`, so every solution meets `S`.
fn branch_set(g: &Digraph, w: &VertexSet, y: &VertexSet, k: usize, budget: usize) -> Option<VertexSet> {
    if w.len() <= k {
        return None;
    }
    let wit = compute_scattered(g, w, 1, k + 1, budget).ok()??;
    Some(wit.deleted.difference(y))
}

pub(crate) fn solve_ds(inst: &DominationInstance, budget: usize) -> SolveOutcome {
    let mut exhausted = false;
    let found = ds_rec(&inst.graph, inst.w.clone(), &inst.y, inst.k, budget, &mut exhausted);
    finish(inst, Variant::Dominating, found, exhausted)
}

fn ds_rec(g: &Digraph, w: VertexSet, y: &VertexSet, k: usize, budget: usize, exh: &mut bool) -> Option<VertexSet> {
    if w.is_empty() {
        return Some(VertexSet::new());
    }
    if k == 0 {
        return None;
    }
    let Some(branch) = branch_set(g, &w, y, k, budget) else {
        return fallback(g, &w, y, k, false, exh);
    };
    let found = branch.iter().find_map(|s| {
        let mut sol = ds_rec(g, w.difference(&closed_out(g, s)), y, k - 1, budget, exh)?;
        sol.insert(s);
        Some(sol)
    });
    found
}

pub(crate) fn solve_ids(inst: &DominationInstance, budget: usize) -> SolveOutcome {
    let mut exhausted = false;
    let found = ids_rec(&inst.graph, &inst.w, &inst.y, inst.k, budget, &mut exhausted);
    finish(inst, Variant::IndependentDominating, found, exhausted)
}

/// Picking `s` removes `s` and `N^+(s)` and forbids `N^-(s)`.
fn ids_rec(g: &Digraph, w: &VertexSet, y: &VertexSet, k: usize, budget: usize, exh: &mut bool) -> Option<VertexSet> {
    if w.is_empty() {
        return Some(VertexSet::new());
    }
    if k == 0 {
        return None;
    }
    if g.n() <= k {
        return fallback(g, w, y, k, true, exh);
    }
    let Some(branch) = branch_set(g, w, y, k, budget) else {
        return fallback(g, w, y, k, true, exh);
    };
    let found = branch.iter().find_map(|s| {
        let sub = g.without(&closed_out(g, s));
        let mut y2 = y.clone();
        for &p in g.in_neighbors(s) {
            y2.insert(p);
        }
        let sol = ids_rec(&sub.graph, &sub.project(w), &sub.project(&y2), k - 1, budget, exh)?;
        let mut sol = sub.lift(&sol);
        sol.insert(s);
        Some(sol)
    });
    found
}

fn in_balls(g: &Digraph, w: &VertexSet, d: usize) -> BTreeMap<usize, VertexSet> {
    w.iter()
        .map(|v| {
            let dist = g.bfs(&[v], Direction::In, Some(d), None);
            (v, (0..g.n()).filter(|&x| dist[x].is_some()).collect())
        })
        .collect()
}

fn first_irrelevant(balls: &BTreeMap<usize, VertexSet>) -> Option<usize> {
    balls.iter().find_map(|(&w, bw)| balls.iter().any(|(&x, bx)| x != w && bx.is_subset(bw)).then_some(w))
}

/// A target `w` whose in-ball contains the in-ball of another target: any set
/// that `d`-dominates `W - w` then also dominates `w`.
pub fn find_irrelevant_vertex(g: &Digraph, w: &VertexSet, d: usize) -> Option<usize> {
    w.check_in(g).ok()?;
    first_irrelevant(&in_balls(g, w, d))
}

/// Removes irrelevant targets one at a time until none is left.
pub fn reduce_target(g: &Digraph, w: &VertexSet, d: usize) -> VertexSet {
    let mut balls = in_balls(g, w, d);
    while let Some(x) = first_irrelevant(&balls) {
        balls.remove(&x);
    }
    balls.into_keys().collect()
}

pub(crate) fn solve_dds(inst: &DominationInstance) -> SolveOutcome {
    let g = &inst.graph;
    let w = reduce_target(g, &inst.w, inst.d);
    if w.len() > TRACE_MAX_TARGET {
        let cands: Vec<usize> = (0..g.n()).filter(|&v| !inst.y.contains(v)).collect();
        let found =
            smallest_subset(&cands, 0..=inst.k.min(cands.len()), |s| verify_dominating(g, s, inst.d, &w));
        return finish(inst, Variant::Dominating, found, true);
    }
    let pos: BTreeMap<usize, usize> = w.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut classes: BTreeMap<u64, usize> = BTreeMap::new();
    for v in (0..g.n()).filter(|&v| !inst.y.contains(v)) {
        let dist = g.bfs(&[v], Direction::Out, Some(inst.d), None);
        let trace = (0..g.n()).filter(|&x| dist[x].is_some()).filter_map(|x| pos.get(&x)).fold(0u64, |m, &i| m | 1 << i);
        if trace != 0 {
            classes.entry(trace).or_insert(v);
        }
    }
    let maximal: Vec<(u64, usize)> = classes
        .iter()
        .filter(|&(&t, _)| !classes.keys().any(|&o| o != t && o & t == t))
        .map(|(&t, &v)| (t, v))
        .collect();
    let full = if w.len() == 64 { u64::MAX } else { (1u64 << w.len()) - 1 };
    let mut chosen = Vec::new();
    let found = (0..=inst.k)
        .find(|&budget| cover(&maximal, full, 0, budget, &mut chosen))
        .map(|_| chosen.iter().copied().collect());
    finish(inst, Variant::Dominating, found, false)
}

/// Covers the uncovered bits with at most `budget` classes, branching on the
/// classes that contain the lowest uncovered bit.
fn cover(classes: &[(u64, usize)], full: u64, covered: u64, budget: usize, chosen: &mut Vec<usize>) -> bool {
    if covered == full {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let bit = (!covered & full).trailing_zeros();
    for &(t, v) in classes {
        if t >> bit & 1 == 1 {
            chosen.push(v);
            if cover(classes, full, covered | t, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn finish(inst: &DominationInstance, variant: Variant, found: Option<VertexSet>, exhausted: bool) -> SolveOutcome {
    match found {
        Some(set) => {
            let out = SolveOutcome::found(Witness::Set(set), exhausted);
            assert!(out.certifies(inst, variant), "solver witness failed verification");
            out
        }
        None => SolveOutcome::infeasible(exhausted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{acyclic_tournament, crown, random_digraph, reversed_crown};
    use crate::solvers::brute_force_solve;

    fn path(n: usize) -> Digraph {
        Digraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn ids_on_crown() {
        let g = crown(3).unwrap().graph;
        let out = independent_dominating_set(&g, 3, 4);
        assert!(out.feasible);
        let us: VertexSet = (0..g.n()).filter(|&v| g.in_degree(v) == 0).collect();
        assert_eq!(out.witness.unwrap().vertices(), &us);
        assert!(!independent_dominating_set(&g, 2, 4).feasible);
        assert!(independent_dominating_set(&Digraph::empty(1), 1, 4).feasible);
    }

    #[test]
    fn dds_examples() {
        assert!(d_dominating_set(&path(5), 2, 2).feasible);
        assert!(!d_dominating_set(&path(5), 1, 2).feasible);
        let c4 = crown(4).unwrap().graph;
        assert!(d_dominating_set(&c4, 6, 1).feasible);
        assert!(!d_dominating_set(&c4, 5, 1).feasible);
        let t = acyclic_tournament(6);
        assert!(d_dominating_set(&t, 1, 1).feasible);
    }

    #[test]
    fn irrelevant_vertices() {
        let twins = Digraph::from_edges(3, [(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let w = VertexSet::from(vec![1, 2]);
        assert_eq!(find_irrelevant_vertex(&twins, &w, 1), Some(1));
        let nested = Digraph::from_edges(4, [(0, 2), (1, 2), (0, 3)]).unwrap();
        assert_eq!(find_irrelevant_vertex(&nested, &VertexSet::from(vec![2, 3]), 1), None);
        let nested = Digraph::from_edges(4, [(0, 2), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert_eq!(find_irrelevant_vertex(&nested, &VertexSet::from(vec![2, 3]), 1), Some(2));
        let rc = reversed_crown(3).unwrap();
        assert_eq!(find_irrelevant_vertex(&rc.graph, &rc.principals, 1), None);
    }

    #[test]
    fn agree_with_oracle() {
        for seed in 0..40 {
            let g = random_digraph(9, 0.25, seed);
            for k in 0..4 {
                let inst = DominationInstance::new(g.clone(), k);
                let dom = brute_force_solve(&inst, Variant::Dominating).unwrap().feasible;
                assert_eq!(solve_ds(&inst, 3).feasible, dom, "ds seed {seed} k {k}");
                assert_eq!(solve_dds(&inst).feasible, dom, "dds seed {seed} k {k}");
                let ind = brute_force_solve(&inst, Variant::IndependentDominating).unwrap().feasible;
                assert_eq!(solve_ids(&inst, 3).feasible, ind, "ids seed {seed} k {k}");
                let inst2 = inst.clone().with_radius(2);
                let dom2 = brute_force_solve(&inst2, Variant::Dominating).unwrap().feasible;
                assert_eq!(solve_dds(&inst2).feasible, dom2, "dds2 seed {seed} k {k}");
            }
        }
    }
}
