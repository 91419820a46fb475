//! Disjoint paths in acyclic digraphs via a lazily explored product DAG of k-tuples.
//!
//! A state holds the current vertex of every path (or the virtual super-source). One
//! move picks a vertex `w` later in topological order than every current position and
//! advances a nonempty set of paths from a single interval onto `w`. Paths from
//! different intervals therefore never share a vertex, while paths in one interval may.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::MinorError;
use crate::graph::{Digraph, Dipath, Direction};

/// Breakpoints `0 = z_0 < z_1 < ... < z_l = k`; interval `i` is `z_i..z_{i+1}` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPartition {
    breakpoints: Vec<usize>,
}

impl IntervalPartition {
    pub fn new(breakpoints: Vec<usize>) -> Result<Self, MinorError> {
        let ok = breakpoints.first() == Some(&0) && breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !ok && breakpoints != [0] {
            return Err(MinorError::InvalidPartition(format!("{breakpoints:?}")));
        }
        Ok(IntervalPartition { breakpoints })
    }

    /// One interval per index: all paths pairwise disjoint.
    pub fn singletons(k: usize) -> Self {
        IntervalPartition { breakpoints: (0..=k).collect() }
    }

    /// A single interval: no disjointness required.
    pub fn whole(k: usize) -> Self {
        IntervalPartition { breakpoints: if k == 0 { vec![0] } else { vec![0, k] } }
    }

    /// Consecutive intervals of the given (positive) sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, MinorError> {
        let mut b = vec![0];
        for &s in sizes {
            if s == 0 {
                return Err(MinorError::InvalidPartition("empty interval".into()));
            }
            b.push(b.last().unwrap() + s);
        }
        Ok(IntervalPartition { breakpoints: b })
    }

    pub fn k(&self) -> usize {
        *self.breakpoints.last().unwrap()
    }

    pub fn intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    /// Interval index of path `i`.
    pub fn interval_of(&self, i: usize) -> usize {
        self.breakpoints.partition_point(|&z| z <= i) - 1
    }
}

/// Paths `s_i -> t_i`, vertex-disjoint across intervals, or `None` if impossible.
pub fn dag_disjoint_paths(
    g: &Digraph,
    pairs: &[(usize, usize)],
    part: &IntervalPartition,
) -> Result<Option<Vec<Dipath>>, MinorError> {
    solve(g, pairs, part, None)
}

/// As [`dag_disjoint_paths`] with every path of length at most `r`.
pub fn dag_disjoint_paths_bounded(
    g: &Digraph,
    pairs: &[(usize, usize)],
    part: &IntervalPartition,
    r: usize,
) -> Result<Option<Vec<Dipath>>, MinorError> {
    solve(g, pairs, part, Some(r))
}

/// Checks a claimed solution.
pub fn verify_disjoint_paths(
    g: &Digraph,
    pairs: &[(usize, usize)],
    part: &IntervalPartition,
    bound: Option<usize>,
    paths: &[Dipath],
) -> bool {
    if paths.len() != pairs.len() || part.k() != pairs.len() {
        return false;
    }
    let shape_ok = paths.iter().zip(pairs).all(|(p, &(s, t))| {
        p.verify_path(g) && p.first() == Some(s) && p.last() == Some(t) && bound.is_none_or(|r| p.len() <= r)
    });
    shape_ok
        && (0..paths.len()).all(|i| {
            (i + 1..paths.len()).all(|j| {
                part.interval_of(i) == part.interval_of(j)
                    || paths[i].vertices.iter().all(|v| !paths[j].vertices.contains(v))
            })
        })
}

const SOURCE: usize = usize::MAX;

struct Search<'a> {
    g: &'a Digraph,
    /// Topological rank + 1; the super-source has rank 0.
    rank: Vec<usize>,
    by_rank: Vec<usize>,
    starts: Vec<usize>,
    targets: Vec<usize>,
    interval: Vec<usize>,
    /// `to_target[i][v]`: distance from `v` to `targets[i]`.
    to_target: Vec<Vec<Option<usize>>>,
    bound: Option<usize>,
    pos: Vec<usize>,
    len: Vec<usize>,
    trail: Vec<Vec<usize>>,
    dead: HashSet<Vec<usize>>,
}

impl Search<'_> {
    fn rank_of(&self, v: usize) -> usize {
        if v == SOURCE {
            0
        } else {
            self.rank[v]
        }
    }

    fn done(&self, i: usize) -> bool {
        self.pos[i] == self.targets[i]
    }

    /// Whether path `i` may step onto `w`.
    fn can_step(&self, i: usize, w: usize) -> bool {
        let adjacent = if self.pos[i] == SOURCE { w == self.starts[i] } else { self.g.has_edge(self.pos[i], w) };
        if !adjacent {
            return false;
        }
        let Some(rest) = self.to_target[i][w] else { return false };
        let new_len = if self.pos[i] == SOURCE { 0 } else { self.len[i] + 1 };
        self.bound.is_none_or(|r| new_len + rest <= r)
    }

    fn key(&self) -> Vec<usize> {
        let mut k = self.pos.clone();
        if self.bound.is_some() {
            k.extend_from_slice(&self.len);
        }
        k
    }

    fn run(&mut self) -> bool {
        let k = self.pos.len();
        if (0..k).all(|i| self.done(i)) {
            return true;
        }
        let key = self.key();
        if self.dead.contains(&key) {
            return false;
        }
        let floor = (0..k).map(|i| self.rank_of(self.pos[i])).max().unwrap_or(0);
        // Every unfinished path needs some admissible next vertex above the floor.
        let stuck = (0..k).any(|i| {
            !self.done(i) && !self.by_rank[floor..].iter().any(|&w| self.can_step(i, w))
        });
        if !stuck {
            for idx in floor..self.by_rank.len() {
                let w = self.by_rank[idx];
                let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
                for i in 0..k {
                    if !self.done(i) && self.can_step(i, w) {
                        match groups.iter_mut().find(|(iv, _)| *iv == self.interval[i]) {
                            Some((_, list)) => list.push(i),
                            None => groups.push((self.interval[i], vec![i])),
                        }
                    }
                }
                for (_, movers) in groups {
                    let full = (1usize << movers.len()) - 1;
                    for mask in (1..=full).rev() {
                        let chosen: Vec<usize> =
                            (0..movers.len()).filter(|b| mask >> b & 1 == 1).map(|b| movers[b]).collect();
                        let saved: Vec<(usize, usize)> = chosen.iter().map(|&i| (self.pos[i], self.len[i])).collect();
                        for &i in &chosen {
                            self.len[i] = if self.pos[i] == SOURCE { 0 } else { self.len[i] + 1 };
                            self.pos[i] = w;
                            self.trail[i].push(w);
                        }
                        if self.run() {
                            return true;
                        }
                        for (&i, &(p, l)) in chosen.iter().zip(&saved) {
                            self.pos[i] = p;
                            self.len[i] = l;
                            self.trail[i].pop();
                        }
                    }
                }
            }
        }
        self.dead.insert(key);
        false
    }
}

fn solve(
    g: &Digraph,
    pairs: &[(usize, usize)],
    part: &IntervalPartition,
    bound: Option<usize>,
) -> Result<Option<Vec<Dipath>>, MinorError> {
    if part.k() != pairs.len() {
        return Err(MinorError::InvalidPartition(format!(
            "partition covers {} indices but {} pairs were given",
            part.k(),
            pairs.len()
        )));
    }
    for &(s, t) in pairs {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
    }
    let order = g.topological_order().map_err(MinorError::NotADag)?;
    let mut rank = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i + 1;
    }
    // Identical requests inside one interval can share a path.
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_of = Vec::with_capacity(pairs.len());
    for (i, &p) in pairs.iter().enumerate() {
        let iv = part.interval_of(i);
        match reps.iter().position(|&j| pairs[j] == p && part.interval_of(j) == iv) {
            Some(r) => rep_of.push(r),
            None => {
                rep_of.push(reps.len());
                reps.push(i);
            }
        }
    }
    let starts: Vec<usize> = reps.iter().map(|&i| pairs[i].0).collect();
    let targets: Vec<usize> = reps.iter().map(|&i| pairs[i].1).collect();
    let to_target: Vec<Vec<Option<usize>>> =
        targets.iter().map(|&t| g.bfs(&[t], Direction::In, bound, None)).collect();
    if (0..reps.len()).any(|i| to_target[i][starts[i]].is_none()) {
        return Ok(None);
    }
    let k = reps.len();
    let mut search = Search {
        g,
        rank,
        by_rank: order,
        starts,
        targets,
        interval: reps.iter().map(|&i| part.interval_of(i)).collect(),
        to_target,
        bound,
        pos: vec![SOURCE; k],
        len: vec![0; k],
        trail: vec![Vec::new(); k],
        dead: HashSet::new(),
    };
    if !search.run() {
        return Ok(None);
    }
    let paths: Vec<Dipath> = rep_of.iter().map(|&r| Dipath::new(search.trail[r].clone())).collect();
    debug_assert!(verify_disjoint_paths(g, pairs, part, bound, &paths));
    Ok(Some(paths))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two sources and two sinks joined only through vertex 2.
    fn bottleneck() -> Digraph {
        Digraph::from_edges(7, [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (6, 0)]).unwrap()
    }

    #[test]
    fn partition_basics() {
        let p = IntervalPartition::from_sizes(&[2, 1, 3]).unwrap();
        assert_eq!(p.breakpoints(), &[0, 2, 3, 6]);
        assert_eq!((0..6).map(|i| p.interval_of(i)).collect::<Vec<_>>(), vec![0, 0, 1, 2, 2, 2]);
        assert!(IntervalPartition::new(vec![0, 2, 2]).is_err());
        assert!(IntervalPartition::new(vec![1, 2]).is_err());
        assert_eq!(IntervalPartition::whole(0).k(), 0);
    }

    #[test]
    fn single_pair() {
        let g = bottleneck();
        let p = dag_disjoint_paths(&g, &[(6, 4)], &IntervalPartition::whole(1)).unwrap().unwrap();
        assert_eq!(p[0].vertices, vec![6, 0, 2, 3, 4]);
    }

    #[test]
    fn shared_cut_vertex() {
        let g = bottleneck();
        let pairs = [(0, 4), (1, 5)];
        assert!(dag_disjoint_paths(&g, &pairs, &IntervalPartition::whole(2)).unwrap().is_some());
        assert!(dag_disjoint_paths(&g, &pairs, &IntervalPartition::singletons(2)).unwrap().is_none());
    }

    #[test]
    fn length_bound() {
        let g = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let one = IntervalPartition::whole(1);
        assert!(dag_disjoint_paths_bounded(&g, &[(0, 3)], &one, 2).unwrap().is_none());
        assert!(dag_disjoint_paths_bounded(&g, &[(0, 3)], &one, 3).unwrap().is_some());
        assert!(dag_disjoint_paths_bounded(&g, &[(1, 1)], &one, 0).unwrap().is_some());
        assert!(dag_disjoint_paths_bounded(&g, &[(1, 2)], &one, 0).unwrap().is_none());
    }

    #[test]
    fn degenerate_pairs_block_other_intervals() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let part = IntervalPartition::singletons(2);
        assert!(dag_disjoint_paths(&g, &[(0, 2), (1, 1)], &part).unwrap().is_none());
        assert!(dag_disjoint_paths(&g, &[(0, 0), (1, 2)], &part).unwrap().is_some());
    }

    #[test]
    fn rejects_cycles() {
        let g = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(
            dag_disjoint_paths(&g, &[(0, 1)], &IntervalPartition::whole(1)),
            Err(MinorError::NotADag(_))
        ));
    }
}
