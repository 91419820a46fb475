use num_traits::ToPrimitive;

use super::{spanning_outbranching, DominationInstance, SolveError, SolveOutcome, Variant, Witness};
use crate::graph::VertexSet;
use crate::numeric::{binomial, next_combination};

/// Candidate subsets [`brute_force_solve`] may examine.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 26;

/// First `size`-subset of `cands` (lexicographic in position) accepted by `pred`.
pub(crate) fn first_subset(cands: &[usize], size: usize, mut pred: impl FnMut(&VertexSet) -> bool) -> Option<VertexSet> {
    if size > cands.len() {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let set: VertexSet = idx.iter().map(|&i| cands[i]).collect();
        if pred(&set) {
            return Some(set);
        }
        if !next_combination(&mut idx, cands.len()) {
            return None;
        }
    }
}

/// First subset of least size in `sizes` accepted by `pred`.
pub(crate) fn smallest_subset(
    cands: &[usize],
    sizes: impl IntoIterator<Item = usize>,
    mut pred: impl FnMut(&VertexSet) -> bool,
) -> Option<VertexSet> {
    sizes.into_iter().find_map(|s| first_subset(cands, s, &mut pred))
}

pub(crate) fn witness_for(inst: &DominationInstance, variant: Variant, set: VertexSet) -> Witness {
    match variant {
        Variant::OutBranching if !set.is_empty() => {
            Witness::Branching(spanning_outbranching(&inst.graph, &set).expect("accepted set spans an out-branching"))
        }
        _ => Witness::Set(set),
    }
}

/// Exhaustive search over vertex subsets outside `Y`, by size then lexicographically.
pub fn brute_force_solve(inst: &DominationInstance, variant: Variant) -> Result<SolveOutcome, SolveError> {
    inst.validate()?;
    let cands: Vec<usize> = (0..inst.graph.n()).filter(|&v| !inst.y.contains(v)).collect();
    let sizes: Vec<usize> = match variant {
        Variant::Independent => vec![inst.k],
        _ => (0..=inst.k.min(cands.len())).collect(),
    };
    let total: u64 = sizes
        .iter()
        .map(|&s| binomial(cands.len() as u64, s as u64).to_u64().unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    if total > BRUTE_FORCE_LIMIT {
        return Err(SolveError::TooLarge(format!("{total} subsets")));
    }
    let found = smallest_subset(&cands, sizes, |s| inst.satisfies(variant, s));
    Ok(match found {
        Some(set) => SolveOutcome::found(witness_for(inst, variant, set), true),
        None => SolveOutcome::infeasible(true),
    })
}
