use super::brute::first_subset;
use super::{verify_distance_independent, DominationInstance, SolveOutcome, Variant, Witness};
use crate::graph::{Digraph, VertexSet};
use crate::quasiwide::compute_scattered;

/// Independent set of size `k`.
pub fn independent_set(g: &Digraph, k: usize, scatter_budget: usize) -> SolveOutcome {
    solve_is(&DominationInstance::new(g.clone(), k), scatter_budget)
}

/// A `d`-scattered set outside the deletion set is tried first. For `d = 1` it is
/// always independent; for larger `d` a path through the deletion set can spoil
/// it, so the candidate is re-checked.
pub(crate) fn solve_is(inst: &DominationInstance, budget: usize) -> SolveOutcome {
    let g = &inst.graph;
    let (k, d) = (inst.k, inst.d);
    let cands: VertexSet = (0..g.n()).filter(|&v| !inst.y.contains(v)).collect();
    if k == 0 {
        return SolveOutcome::found(Witness::Set(VertexSet::new()), false);
    }
    if cands.len() >= k {
        if let Ok(Some(wit)) = compute_scattered(g, &cands, d, k, budget) {
            if verify_distance_independent(g, &wit.set, d) {
                let out = SolveOutcome::found(Witness::Set(wit.set), false);
                assert!(out.certifies(inst, Variant::Independent), "solver witness failed verification");
                return out;
            }
        }
    }
    match first_subset(cands.as_slice(), k, |s| verify_distance_independent(g, s, d)) {
        Some(set) => SolveOutcome::found(Witness::Set(set), true),
        None => SolveOutcome::infeasible(true),
    }
}
