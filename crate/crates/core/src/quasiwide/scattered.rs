use serde::{Deserialize, Serialize};

use super::QuasiError;
use crate::graph::{Digraph, Direction, VertexSet};
use crate::numeric::next_combination;

/// Subsets examined by [`compute_scattered`] before it gives up.
pub const COMPUTE_SCATTERED_LIMIT: usize = 1 << 20;

/// `set` is `radius`-scattered in the host with `deleted` removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredWitness {
    pub deleted: VertexSet,
    pub set: VertexSet,
    pub radius: usize,
}

impl ScatteredWitness {
    /// Recomputes scatteredness in `g - deleted` from scratch.
    pub fn verify(&self, g: &Digraph) -> bool {
        if self.deleted.iter().chain(self.set.iter()).any(|v| v >= g.n()) || !self.set.is_disjoint(&self.deleted) {
            return false;
        }
        let sub = g.without(&self.deleted);
        is_scattered(&sub.graph, &sub.project(&self.set), self.radius)
    }
}

/// No vertex has two distinct members of `u` in its radius-`d` out-ball.
pub fn is_scattered(g: &Digraph, u: &VertexSet, d: usize) -> bool {
    let mut hit = vec![false; g.n()];
    for x in u.iter() {
        for (v, dist) in g.bfs(&[x], Direction::In, Some(d), None).into_iter().enumerate() {
            if dist.is_some() && std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
    }
    true
}

/// Searches subsets `U` of `w` (size at least `m`, by size then lexicographically)
/// whose common `d`-ancestors `C` number at most `s_budget` and leave `m` members of
/// `U` outside `C`; returns `(C, first m of U - C)`.
pub fn compute_scattered(
    g: &Digraph,
    w: &VertexSet,
    d: usize,
    m: usize,
    s_budget: usize,
) -> Result<Option<ScatteredWitness>, QuasiError> {
    if m > w.len() {
        return Err(QuasiError::Precondition(format!("m = {m} exceeds |W| = {}", w.len())));
    }
    w.check_in(g)?;
    let ws: Vec<usize> = w.iter().collect();
    let balls: Vec<Vec<usize>> = ws
        .iter()
        .map(|&x| {
            let dist = g.bfs(&[x], Direction::In, Some(d), None);
            (0..g.n()).filter(|&v| dist[v].is_some()).collect()
        })
        .collect();
    let mut examined = 0usize;
    for size in m.max(1)..=ws.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            if examined > COMPUTE_SCATTERED_LIMIT {
                return Err(QuasiError::BudgetExhausted);
            }
            let mut count = vec![0u8; g.n()];
            for &i in &idx {
                for &v in &balls[i] {
                    count[v] = count[v].saturating_add(1);
                }
            }
            let c: VertexSet = (0..g.n()).filter(|&v| count[v] >= 2).collect();
            if c.len() <= s_budget {
                let rest: Vec<usize> = idx.iter().map(|&i| ws[i]).filter(|&x| !c.contains(x)).collect();
                if rest.len() >= m {
                    let out = ScatteredWitness { deleted: c, set: rest[..m].iter().copied().collect(), radius: d };
                    if out.verify(g) {
                        return Ok(Some(out));
                    }
                }
            }
            if !next_combination(&mut idx, ws.len()) {
                break;
            }
        }
    }
    if m == 0 {
        return Ok(Some(ScatteredWitness { deleted: VertexSet::new(), set: VertexSet::new(), radius: d }));
    }
    Ok(None)
}

/// Greedy maximal `d`-scattered subset of `g`: members of `first` are tried first, then
/// the remaining vertices in index order.
pub fn greedy_scattered(g: &Digraph, first: &VertexSet, d: usize) -> VertexSet {
    let mut set = VertexSet::new();
    for v in first.iter().chain((0..g.n()).filter(|&v| !first.contains(v))) {
        let mut next = set.clone();
        next.insert(v);
        if is_scattered(g, &next, d) {
            set = next;
        }
    }
    set
}
