//! Graph families: crowns, alternating paths, tournaments, oriented grids, random
//! out-regular bipartite digraphs, plus generic random digraphs for testing.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Digraph, GraphError, VertexSet};
use crate::numeric::{binomial, binomial_signed, pairs, rng};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input is not an orientation of a 2l x 3 grid: {0}")]
    NotAGrid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn invalid(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidParameter(msg.into())
}

/// A crown `S_q` or its reversal with the principal vertices marked.
#[derive(Debug, Clone)]
pub struct Crown {
    pub graph: Digraph,
    pub order: usize,
    pub principals: VertexSet,
}

impl Crown {
    /// Vertex id of the connector for principals `i < j` (0-based).
    pub fn connector(&self, i: usize, j: usize) -> usize {
        crown_connector(self.order, i, j)
    }
}

/// Layout: principals `0..q`, then connectors `u_{i,j}` in lexicographic `(i, j)` order.
pub fn crown_connector(q: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < q);
    // Pairs (i', j') lexicographically before (i, j).
    let before: usize = (0..i).map(|a| q - 1 - a).sum::<usize>() + (j - i - 1);
    q + before
}

pub fn crown(q: usize) -> Result<Crown, GeneratorError> {
    if q == 0 {
        return Err(invalid("crown order must be positive"));
    }
    let mut edges = Vec::with_capacity(q * (q - 1));
    for i in 0..q {
        for j in i + 1..q {
            let u = crown_connector(q, i, j);
            edges.push((u, i));
            edges.push((u, j));
        }
    }
    let graph = Digraph::from_edges(q + pairs(q), edges)?;
    Ok(Crown { graph, order: q, principals: VertexSet::range(q) })
}

pub fn reversed_crown(q: usize) -> Result<Crown, GeneratorError> {
    let c = crown(q)?;
    Ok(Crown { graph: c.graph.reversed(), ..c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// Every edge points at its odd-indexed end (1-based).
    Odd,
    /// Every edge points at its even-indexed end (1-based).
    Even,
}

/// `AP_k` on `v_1..v_{k+2}` (ids `0..k+2`).
pub fn alternating_path(k: usize, phase: Phase) -> Result<Digraph, GeneratorError> {
    if k == 0 {
        return Err(invalid("alternating path needs k >= 1"));
    }
    let edges = (1..=k + 1).map(|i| {
        // Edge between v_i and v_{i+1}; exactly one of them is odd.
        let (odd, even) = if i % 2 == 1 { (i, i + 1) } else { (i + 1, i) };
        match phase {
            Phase::Odd => (even - 1, odd - 1),
            Phase::Even => (odd - 1, even - 1),
        }
    });
    Ok(Digraph::from_edges(k + 2, edges)?)
}

/// Transitive tournament `i -> j` for `i < j`.
pub fn acyclic_tournament(n: usize) -> Digraph {
    Digraph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut r = rng(seed, 0);
    let mut edges = Vec::with_capacity(pairs(n));
    for i in 0..n {
        for j in i + 1..n {
            edges.push(if r.random_bool(0.5) { (i, j) } else { (j, i) });
        }
    }
    Digraph::from_edges(n, edges).unwrap()
}

/// Each ordered pair independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut r = rng(seed, 1);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| r.random_bool(p))
        .collect();
    Digraph::from_edges(n, edges).unwrap()
}

/// Random DAG: each pair `i < j` becomes an edge with probability `p`, then ids are shuffled.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Digraph {
    let mut r = rng(seed, 2);
    let perm = sample(&mut r, n, n).into_vec();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random_bool(p) {
                edges.push((perm[i], perm[j]));
            }
        }
    }
    Digraph::from_edges(n, edges).unwrap()
}

/// 1-based grid position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCoord {
    pub row: usize,
    pub col: usize,
}

impl GridCoord {
    pub fn new(row: usize, col: usize) -> Self {
        GridCoord { row, col }
    }

    /// Row-major id in a grid with `cols` columns.
    pub fn id(self, cols: usize) -> usize {
        (self.row - 1) * cols + (self.col - 1)
    }
}

/// Undirected grid edges `(a, b)` with `a < b`, in lexicographic order.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for r in 1..=rows {
        for c in 1..=cols {
            let v = GridCoord::new(r, c).id(cols);
            if c < cols {
                e.push((v, v + 1));
            }
            if r < rows {
                e.push((v, v + cols));
            }
        }
    }
    e.sort_unstable();
    e
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridOrientation {
    Seeded(u64),
    /// One flag per edge of [`grid_edges`]: `true` orients it from the smaller id.
    Explicit(Vec<bool>),
}

pub fn oriented_grid(
    rows: usize,
    cols: usize,
    orientation: &GridOrientation,
) -> Result<Digraph, GeneratorError> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid dimensions must be positive"));
    }
    let und = grid_edges(rows, cols);
    let flags: Vec<bool> = match orientation {
        GridOrientation::Seeded(seed) => {
            let mut r = rng(*seed, 3);
            und.iter().map(|_| r.random_bool(0.5)).collect()
        }
        GridOrientation::Explicit(f) => {
            if f.len() != und.len() {
                return Err(invalid(format!("expected {} orientation flags, got {}", und.len(), f.len())));
            }
            f.clone()
        }
    };
    let edges = und.iter().zip(&flags).map(|(&(a, b), &fwd)| if fwd { (a, b) } else { (b, a) });
    Ok(Digraph::from_edges(rows * cols, edges)?)
}

/// A path through a grid orientation, with its alternation count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPath {
    pub coords: Vec<GridCoord>,
    pub vertices: Vec<usize>,
    pub alternations: usize,
}

/// Path from `(1,1)` to row `2l` with at least `l` alternations in an oriented `2l x 3` grid.
pub fn extract_grid_alternating_path(g: &Digraph) -> Result<GridPath, GeneratorError> {
    let n = g.n();
    if n == 0 || !n.is_multiple_of(6) {
        return Err(GeneratorError::NotAGrid(format!("{n} vertices is not 6l")));
    }
    let rows = n / 3;
    let expected = grid_edges(rows, 3);
    let und: Vec<(usize, usize)> = g.underlying_undirected().edges().collect();
    if und != expected || g.edge_count() != expected.len() {
        return Err(GeneratorError::NotAGrid("edge set differs from the grid".into()));
    }
    let mut memo = HashMap::new();
    let coords = grid_segment(g, rows, 1, 1, &mut memo)
        .ok_or_else(|| GeneratorError::NotAGrid("no qualifying route".into()))?;
    let vertices: Vec<usize> = coords.iter().map(|c| c.id(3)).collect();
    let alternations = g.count_alternations(&vertices)?;
    Ok(GridPath { coords, vertices, alternations })
}

fn row_pair_routes(row: usize, col: usize) -> [Vec<GridCoord>; 2] {
    let c = |r: usize, k: usize| GridCoord::new(r, k);
    let (near, far) = if col == 1 { (1, 3) } else { (3, 1) };
    let p1 = vec![c(row, near), c(row, 2), c(row, far), c(row + 1, far), c(row + 1, 2), c(row + 1, near)];
    let p3 = vec![c(row, near), c(row, 2), c(row + 1, 2), c(row + 1, far)];
    [p1, p3]
}

/// Route through rows `row..=rows` from `(row, col)` with at least one alternation per row pair.
fn grid_segment(
    g: &Digraph,
    rows: usize,
    row: usize,
    col: usize,
    memo: &mut HashMap<(usize, usize), Option<Vec<GridCoord>>>,
) -> Option<Vec<GridCoord>> {
    if let Some(hit) = memo.get(&(row, col)) {
        return hit.clone();
    }
    let needed = (rows - row).div_ceil(2);
    let mut found = None;
    for route in row_pair_routes(row, col) {
        let mut full = route.clone();
        if row + 1 < rows {
            let end_col = route.last().unwrap().col;
            match grid_segment(g, rows, row + 2, end_col, memo) {
                Some(rest) => full.extend(rest),
                None => continue,
            }
        }
        let ids: Vec<usize> = full.iter().map(|c| c.id(3)).collect();
        if g.count_alternations(&ids).is_ok_and(|a| a >= needed) {
            found = Some(full);
            break;
        }
    }
    memo.insert((row, col), found.clone());
    found
}

/// Sides `A = 0..n`, `B = n..2n`; every `a` picks `d` distinct uniform targets in `B`.
pub fn random_bipartite_outregular(n: usize, d: usize, seed: u64) -> Result<Digraph, GeneratorError> {
    if d > n {
        return Err(invalid(format!("d = {d} exceeds n = {n}")));
    }
    let mut r = rng(seed, 4);
    let mut edges = Vec::with_capacity(n * d);
    for a in 0..n {
        for b in sample(&mut r, n, d).into_iter() {
            edges.push((a, n + b));
        }
    }
    Ok(Digraph::from_edges(2 * n, edges)?)
}

/// Probability that a fixed labelled `S_q` pattern appears in `random_bipartite_outregular`,
/// and the simple upper bound it is compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrownPatternProbability {
    /// `(C(n-2, d-2) / C(n, d))^C(q,2)`
    pub exact: BigRational,
    /// `(2d / n)^(q(q-1))`
    pub bound: BigRational,
}

pub fn crown_pattern_probability(n: usize, d: usize, q: usize) -> Result<CrownPatternProbability, GeneratorError> {
    if n == 0 || q == 0 || d > n {
        return Err(invalid("need n >= 1, q >= 1, d <= n"));
    }
    let num = binomial_signed(n as i64 - 2, d as i64 - 2);
    let den = binomial(n as u64, d as u64);
    let single = BigRational::new(to_int(num), to_int(den));
    let e = pairs(q);
    let exact = pow_ratio(&single, e);
    let ratio = BigRational::new(BigInt::from(2 * d), BigInt::from(n));
    let bound = pow_ratio(&ratio, q * (q - 1));
    Ok(CrownPatternProbability { exact, bound })
}

fn to_int(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn pow_ratio(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    if e == 0 || !x.is_zero() {
        acc
    } else {
        BigRational::zero()
    }
}

/// Whether the labelled pattern `alpha -> beta` (connector `alpha[k]` for principal pair k)
/// is present: `alpha[k]` points at both principals of pair `k`.
pub fn has_crown_pattern(g: &Digraph, alpha: &[usize], beta: &[usize]) -> bool {
    let q = beta.len();
    let mut k = 0;
    for i in 0..q {
        for j in i + 1..q {
            if !(g.has_edge(alpha[k], beta[i]) && g.has_edge(alpha[k], beta[j])) {
                return false;
            }
            k += 1;
        }
    }
    true
}

/// Ordered vertex sequence `v_1..v_n` of `t` with `v_i -> v_j` for all `i < j`, built by
/// repeatedly taking a vertex of maximum out-degree inside the remaining candidate set.
pub fn embed_acyclic_tournament(t: &Digraph, n: usize) -> Option<Vec<usize>> {
    let mut cand: Vec<usize> = (0..t.n()).collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let &v = cand
            .iter()
            .max_by_key(|&&v| (cand.iter().filter(|&&w| t.has_edge(v, w)).count(), std::cmp::Reverse(v)))?;
        out.push(v);
        cand.retain(|&w| t.has_edge(v, w));
    }
    Some(out)
}

pub fn verify_tournament_embedding(t: &Digraph, seq: &[usize]) -> bool {
    let distinct = seq.iter().collect::<std::collections::BTreeSet<_>>().len() == seq.len();
    distinct
        && seq.iter().all(|&v| v < t.n())
        && (0..seq.len()).all(|i| (i + 1..seq.len()).all(|j| t.has_edge(seq[i], seq[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crown_shapes() {
        let c3 = crown(3).unwrap();
        assert_eq!((c3.graph.n(), c3.graph.edge_count()), (6, 6));
        let c1 = crown(1).unwrap();
        assert_eq!((c1.graph.n(), c1.graph.edge_count()), (1, 0));
        let c4 = crown(4).unwrap();
        assert_eq!((c4.graph.n(), c4.graph.edge_count()), (10, 12));
        for v in 0..4 {
            assert_eq!(c4.graph.in_degree(v), 3);
            assert_eq!(c4.graph.out_degree(v), 0);
        }
        for u in 4..10 {
            assert_eq!((c4.graph.out_degree(u), c4.graph.in_degree(u)), (2, 0));
        }
        assert_eq!(c4.connector(0, 1), 4);
        assert_eq!(c4.connector(2, 3), 9);
        assert!(c4.graph.has_edge(c4.connector(1, 3), 3));
        assert!(crown(0).is_err());
    }

    #[test]
    fn reversed_crown_indegrees() {
        for q in 1..7 {
            let r = reversed_crown(q).unwrap();
            assert!((0..r.graph.n()).all(|v| r.graph.in_degree(v) <= 2));
            assert_eq!(r.graph.underlying_undirected(), crown(q).unwrap().graph.underlying_undirected());
        }
        assert_eq!(reversed_crown(3).unwrap().graph.edge_count(), 6);
    }

    #[test]
    fn alternating_paths() {
        let a1 = alternating_path(1, Phase::Odd).unwrap();
        assert_eq!(a1.edges().collect::<Vec<_>>(), vec![(1, 0), (1, 2)]);
        let a2 = alternating_path(2, Phase::Even).unwrap();
        assert_eq!(a2.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 1), (2, 3)]);
        for k in 1..8 {
            for ph in [Phase::Odd, Phase::Even] {
                let g = alternating_path(k, ph).unwrap();
                let spine: Vec<usize> = (0..k + 2).collect();
                assert_eq!(g.count_alternations(&spine).unwrap(), k);
                assert!(g.is_dag());
            }
        }
        assert!(alternating_path(0, Phase::Odd).is_err());
    }

    #[test]
    fn tournaments() {
        let t = acyclic_tournament(3);
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(t.is_dag());
        let r = random_tournament(7, 3);
        assert_eq!(r.edge_count(), 21);
        assert_eq!(r.underlying_undirected().edge_count(), 21);
        assert_eq!(r, random_tournament(7, 3));
    }

    #[test]
    fn grids() {
        assert_eq!(grid_edges(2, 3).len(), 7);
        let fwd = oriented_grid(2, 3, &GridOrientation::Explicit(vec![true; 7])).unwrap();
        assert!(fwd.is_dag());
        let g = oriented_grid(4, 3, &GridOrientation::Seeded(11)).unwrap();
        let und: Vec<_> = g.underlying_undirected().edges().collect();
        assert_eq!(und, grid_edges(4, 3));
    }

    #[test]
    fn grid_extractor_all_forward_uses_short_route() {
        // Edge order for 2x3: (0,1) (0,3) (1,2) (1,4) (2,5) (3,4) (4,5).
        // Orient the long route (1,1)(1,2)(1,3)(2,3)(2,2)(2,1) as a directed path.
        let flags = vec![true, false, true, true, true, false, false];
        let g = oriented_grid(2, 3, &GridOrientation::Explicit(flags)).unwrap();
        assert_eq!(g.count_alternations(&[0, 1, 2, 5, 4, 3]).unwrap(), 0);
        let p = extract_grid_alternating_path(&g).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 4, 5]);
        assert!(p.alternations >= 1);
    }

    #[test]
    fn grid_extractor_rejects_non_grids() {
        assert!(extract_grid_alternating_path(&Digraph::empty(6)).is_err());
        assert!(extract_grid_alternating_path(&Digraph::empty(5)).is_err());
    }

    #[test]
    fn outregular() {
        let g = random_bipartite_outregular(4, 4, 1).unwrap();
        assert_eq!(g.edge_count(), 16);
        let h = random_bipartite_outregular(9, 3, 5).unwrap();
        assert!((0..9).all(|a| h.out_degree(a) == 3));
        assert_eq!(h, random_bipartite_outregular(9, 3, 5).unwrap());
        assert!(random_bipartite_outregular(2, 3, 0).is_err());
    }

    #[test]
    fn crown_probability_values() {
        let p = crown_pattern_probability(4, 2, 2).unwrap();
        assert_eq!(p.exact, BigRational::new(1.into(), 6.into()));
        let z = crown_pattern_probability(6, 1, 2).unwrap();
        assert!(z.exact.is_zero());
        let one = crown_pattern_probability(6, 1, 1).unwrap();
        assert!(one.exact.is_one());
    }

    #[test]
    fn tournament_embedding_small() {
        for seed in 0..20 {
            let t = random_tournament(8, seed);
            let seq = embed_acyclic_tournament(&t, 3).unwrap();
            assert!(verify_tournament_embedding(&t, &seq));
        }
    }
}
