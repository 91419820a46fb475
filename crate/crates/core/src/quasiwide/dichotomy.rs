use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::controlled::{build_controlled_bipartite, ControlledBipartite, ControlledCrown};
use super::extract::{rcdbg_extract, RcdbgOutcome};
use super::scattered::{is_scattered, ScatteredWitness};
use super::{Effort, QuasiError};
use crate::generators::crown;
use crate::graph::{Digraph, Dipath, Direction, VertexSet};
use crate::minors::{is_valid_model, BranchSet, DirectedModel};

/// Either a depth-`depth` model of the crown `S_order`, or a scattered set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dichotomy {
    Crown { order: usize, depth: usize, model: DirectedModel },
    Scattered(ScatteredWitness),
}

impl Dichotomy {
    /// Re-runs the relevant verifier against `g`.
    pub fn verify(&self, g: &Digraph) -> bool {
        match self {
            Dichotomy::Crown { order, depth, model } => {
                model.depth.is_some_and(|d| d <= *depth)
                    && crown(*order).is_ok_and(|c| is_valid_model(&c.graph, g, model))
            }
            Dichotomy::Scattered(w) => w.verify(g),
        }
    }
}

/// From an `r`-scattered set `i`: a depth-`r` model of `S_q`, or `p` members of `i`
/// that are `(r+1)`-scattered after deleting at most `C(q, 2)` vertices.
pub fn main_tec_step(g: &Digraph, i: &VertexSet, r: usize, p: usize, q: usize) -> Result<Dichotomy, QuasiError> {
    main_tec_step_with(g, i, r, p, q, &mut Effort::best_effort(super::DEFAULT_BUDGET))
}

pub fn main_tec_step_with(
    g: &Digraph,
    i: &VertexSet,
    r: usize,
    p: usize,
    q: usize,
    effort: &mut Effort,
) -> Result<Dichotomy, QuasiError> {
    let cb = build_controlled_bipartite(g, i, r)?;
    let out = match rcdbg_extract(&cb, p, q, effort)? {
        RcdbgOutcome::Scattered(s) => {
            let deleted: VertexSet = s.deleted.iter().map(|&a| cb.a[a]).collect();
            let w = ScatteredWitness { deleted, set: s.set, radius: r + 1 };
            if w.deleted.len() > q * q.saturating_sub(1) / 2 || w.set.len() != p {
                return Err(QuasiError::Internal("scattered outcome has the wrong sizes".into()));
            }
            Dichotomy::Scattered(w)
        }
        RcdbgOutcome::Crown(c) => Dichotomy::Crown { order: q, depth: r, model: crown_model(g, &cb, &c) },
    };
    if !out.verify(g) {
        return Err(QuasiError::Internal("dichotomy outcome failed verification".into()));
    }
    Ok(out)
}

/// Connectors become singleton branches; each principal `b` gets an in-branching of
/// the labels on its crown edges.
fn crown_model(g: &Digraph, cb: &ControlledBipartite, c: &ControlledCrown) -> DirectedModel {
    let q = c.b.len();
    let pattern = crown(q).expect("positive order").graph;
    let mut labels: Vec<Vec<usize>> = c.b.iter().map(|&b| vec![b]).collect();
    let mut edge_images = Vec::new();
    for (u, v) in pattern.edges() {
        let a = c.a[u - q];
        let e = cb.edge(a, c.b[v]).expect("crown edges exist");
        labels[v].extend_from_slice(&e.eta);
        edge_images.push((cb.a[a], *e.eta.last().unwrap_or(&c.b[v])));
    }
    let mut branches: Vec<BranchSet> = labels
        .into_iter()
        .zip(&c.b)
        .map(|(set, &b)| in_branching(g, set.into_iter().collect(), b))
        .collect();
    branches.extend(c.a.iter().map(|&a| BranchSet::singleton(cb.a[a])));
    DirectedModel { branches, edge_images, depth: Some(cb.r) }
}

fn in_branching(g: &Digraph, set: VertexSet, root: usize) -> BranchSet {
    let mut edges = Vec::new();
    let mut seen = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in g.in_neighbors(x) {
            if set.contains(y) && !seen.contains(&y) {
                seen.push(y);
                edges.push((y, x));
                queue.push_back(y);
            }
        }
    }
    edges.sort_unstable();
    BranchSet { vertices: set, edges, source: root, sink: root }
}

/// Repeats [`main_tec_step`] for radii `0..target_r`, deleting the accumulated sets and
/// using crown order `qs[i]` at radius `i`; ends with `m` members of `w` that are
/// `target_r`-scattered, unless a crown turns up on the way.
///
/// At each radius the largest feasible size of the next scattered set is tried first.
pub fn uqw_iterate(
    g: &Digraph,
    w: &VertexSet,
    target_r: usize,
    m: usize,
    qs: &[usize],
    budget: u64,
) -> Result<Dichotomy, QuasiError> {
    w.check_in(g)?;
    if m > w.len() {
        return Err(QuasiError::Precondition(format!("m = {m} exceeds |W| = {}", w.len())));
    }
    if qs.len() < target_r {
        return Err(QuasiError::Precondition(format!("need {target_r} crown orders, got {}", qs.len())));
    }
    let mut effort = Effort::best_effort(budget);
    let mut deleted = VertexSet::new();
    let mut current = w.clone();
    for (radius, &q) in qs.iter().enumerate().take(target_r) {
        let sub = g.without(&deleted);
        let local = sub.project(&current);
        let mut advanced = None;
        for p in (m..=local.len()).rev() {
            match main_tec_step_with(&sub.graph, &local, radius, p, q, &mut effort) {
                Ok(out) => {
                    advanced = Some(out);
                    break;
                }
                Err(QuasiError::BestEffortFailure(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        match advanced {
            Some(Dichotomy::Scattered(s)) => {
                deleted = deleted.union(&sub.lift(&s.deleted));
                current = sub.lift(&s.set);
            }
            Some(Dichotomy::Crown { order, depth, model }) => {
                let out = Dichotomy::Crown { order, depth, model: model.relabel(&sub.to_old) };
                return if out.verify(g) { Ok(out) } else { Err(QuasiError::Internal("lifted crown failed".into())) };
            }
            None => return Err(QuasiError::BestEffortFailure(format!("no outcome at radius {radius}"))),
        }
    }
    let out = ScatteredWitness { deleted, set: current.iter().take(m).collect(), radius: target_r };
    if !out.verify(g) {
        return Err(QuasiError::Internal("final scattered set failed verification".into()));
    }
    Ok(Dichotomy::Scattered(out))
}

/// Two paths of length at most `2r + 1` in `g - S` from one root to two members of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    pub root: usize,
    pub paths: [Dipath; 2],
}

/// Confronts a depth-`r` model of `S_q` with a `(2r+1)`-scattered witness: looks for a
/// connector branch avoiding `S` whose two principal branches avoid `S` and have their
/// sinks in `U`, then exhibits the short paths from its source to both sinks.
pub fn uqw_refutes_crownful(
    g: &Digraph,
    r: usize,
    q: usize,
    model: Option<&DirectedModel>,
    witness: &ScatteredWitness,
) -> Option<Contradiction> {
    let model = model?;
    let pattern = crown(q).ok()?.graph;
    if model.depth.is_none_or(|d| d > r) || !is_valid_model(&pattern, g, model) {
        return None;
    }
    let clean = |b: &BranchSet| b.vertices.is_disjoint(&witness.deleted);
    let good: Vec<bool> =
        (0..q).map(|i| clean(&model.branches[i]) && witness.set.contains(model.branches[i].sink)).collect();
    let keep: Vec<bool> = (0..g.n()).map(|v| !witness.deleted.contains(v)).collect();
    for u in q..pattern.n() {
        let ends: Vec<usize> = pattern.out_neighbors(u).to_vec();
        if !clean(&model.branches[u]) || !ends.iter().all(|&x| good[x]) {
            continue;
        }
        let root = model.branches[u].source;
        let parents = bfs_tree(g, root, 2 * r + 1, &keep);
        let path = |t: usize| -> Option<Dipath> {
            let mut vs = vec![t];
            while *vs.last().unwrap() != root {
                vs.push(parents[*vs.last().unwrap()]?);
            }
            vs.reverse();
            Some(Dipath::new(vs))
        };
        let sinks: Vec<usize> = ends.iter().map(|&x| model.branches[x].sink).collect();
        if let (Some(a), Some(b)) = (path(sinks[0]), path(sinks[1])) {
            return Some(Contradiction { root, paths: [a, b] });
        }
    }
    None
}

fn bfs_tree(g: &Digraph, root: usize, limit: usize, keep: &[bool]) -> Vec<Option<usize>> {
    let dist = g.bfs(&[root], Direction::Out, Some(limit), Some(keep));
    (0..g.n())
        .map(|v| {
            let d = dist[v]?;
            if d == 0 {
                return None;
            }
            g.in_neighbors(v).iter().copied().find(|&x| dist[x] == Some(d - 1))
        })
        .collect()
}

/// Whether `u` is still `radius`-scattered in `g - deleted`; used to confirm refutations.
pub fn scattered_after_deletion(g: &Digraph, deleted: &VertexSet, u: &VertexSet, radius: usize) -> bool {
    let sub = g.without(deleted);
    is_scattered(&sub.graph, &sub.project(u), radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::reversed_crown;
    use crate::minors::DirectedModel;

    #[test]
    fn crown_yields_identity_style_model() {
        for q in 2..5 {
            let c = crown(q).unwrap();
            match main_tec_step(&c.graph, &c.principals, 0, q, q).unwrap() {
                Dichotomy::Crown { order, depth, model } => {
                    assert_eq!((order, depth), (q, 0));
                    assert!(is_valid_model(&c.graph, &c.graph, &model));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn isolated_vertices_are_scattered() {
        let g = Digraph::empty(6);
        for r in 0..3 {
            match main_tec_step(&g, &VertexSet::range(6), r, 4, 2).unwrap() {
                Dichotomy::Scattered(w) => {
                    assert!(w.deleted.is_empty() && w.set.len() == 4 && w.radius == r + 1);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn reversed_crown_is_scattered() {
        let rc = reversed_crown(6).unwrap();
        match main_tec_step(&rc.graph, &rc.principals, 1, 6, 3).unwrap() {
            Dichotomy::Scattered(w) => assert!(w.verify(&rc.graph)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn subdivided_crown_at_depth_one() {
        // Principals are 1-scattered once every connector edge is subdivided; at
        // radius 1 the connectors reach two principals within two steps.
        let c = crown(3).unwrap();
        let n = c.graph.n();
        let edges: Vec<(usize, usize)> = c.graph.edges().collect();
        let pairs = edges.iter().enumerate().flat_map(|(k, &(u, v))| [(u, n + k), (n + k, v)]);
        let g = Digraph::from_edges(n + edges.len(), pairs).unwrap();
        match main_tec_step(&g, &c.principals, 1, 3, 3).unwrap() {
            Dichotomy::Crown { model, .. } => assert!(is_valid_model(&c.graph, &g, &model)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uqw_on_reversed_crowns() {
        let rc = reversed_crown(5).unwrap();
        let out = uqw_iterate(&rc.graph, &rc.principals, 2, 4, &[3, 3], 1 << 20).unwrap();
        assert!(matches!(&out, Dichotomy::Scattered(w) if w.set.len() == 4 && w.radius == 2));
        assert!(out.verify(&rc.graph));
        let zero = uqw_iterate(&rc.graph, &rc.principals, 0, 2, &[], 1 << 20).unwrap();
        assert!(matches!(zero, Dichotomy::Scattered(w) if w.deleted.is_empty() && w.set.len() == 2));
    }

    #[test]
    fn uqw_finds_crowns() {
        let c = crown(4).unwrap();
        let out = uqw_iterate(&c.graph, &c.principals, 2, 4, &[4, 4], 1 << 20).unwrap();
        assert!(matches!(out, Dichotomy::Crown { order: 4, depth: 0, .. }));
    }

    #[test]
    fn refutation_on_fabricated_witness() {
        let c = crown(4).unwrap();
        let model = DirectedModel::identity(&c.graph);
        let fake = ScatteredWitness { deleted: VertexSet::new(), set: c.principals.clone(), radius: 1 };
        let found = uqw_refutes_crownful(&c.graph, 0, 4, Some(&model), &fake).unwrap();
        assert!(found.paths.iter().all(|p| p.len() <= 1 && p.verify_path(&c.graph)));
        assert!(!scattered_after_deletion(&c.graph, &fake.deleted, &fake.set, 1));
    }

    #[test]
    fn refutation_is_vacuous_without_crown() {
        let rc = reversed_crown(4).unwrap();
        let w = ScatteredWitness { deleted: VertexSet::new(), set: rc.principals.clone(), radius: 1 };
        assert!(w.verify(&rc.graph));
        assert!(uqw_refutes_crownful(&rc.graph, 0, 4, None, &w).is_none());
    }

    #[test]
    fn deletions_can_block_refutation() {
        let c = crown(3).unwrap();
        let model = DirectedModel::identity(&c.graph);
        let all_connectors: VertexSet = (3..6).collect();
        let w = ScatteredWitness { deleted: all_connectors, set: c.principals.clone(), radius: 1 };
        assert!(w.verify(&c.graph));
        assert!(uqw_refutes_crownful(&c.graph, 0, 3, Some(&model), &w).is_none());
    }
}
