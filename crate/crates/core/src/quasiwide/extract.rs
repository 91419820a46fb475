use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::bounds::{lemma0_bound, lemma1_bound, peel_bound, rcdbg_bound};
use super::clique::{controlled_clique_extract, EdgeLabels};
use super::controlled::{ControlledBipartite, ControlledCrown, ControlledScattered};
use super::{Effort, Mode, QuasiError};
use crate::graph::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma1Outcome {
    HighDegree { a: usize, successors: Vec<usize> },
    Scattered(ControlledScattered),
    Crown(ControlledCrown),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RcdbgOutcome {
    Scattered(ControlledScattered),
    Crown(ControlledCrown),
}

fn failure(msg: &str) -> QuasiError {
    QuasiError::BestEffortFailure(msg.to_string())
}

fn below(have: usize, need: Result<BigUint, QuasiError>) -> bool {
    need.map_or(true, |n| BigUint::from(have) < n)
}

fn checked(c: &ControlledBipartite, crown: ControlledCrown) -> Result<ControlledCrown, QuasiError> {
    if c.is_controlled_crown(&crown) {
        Ok(crown)
    } else {
        Err(failure("assembled crown violates label avoidance"))
    }
}

/// Crown from principals `b` and a connector per pair, looked up in `conn`.
fn assemble(b: &[usize], conn: &HashMap<(usize, usize), usize>) -> Option<ControlledCrown> {
    let mut a = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            a.push(*conn.get(&(b[i].min(b[j]), b[i].max(b[j])))?);
        }
    }
    Some(ControlledCrown { b: b.to_vec(), a })
}

/// Controlled crown of order `q` in an instance whose A-vertices (those with edges)
/// share one level, where B-vertices pairwise have common predecessors.
pub fn lemma0_extract(c: &ControlledBipartite, q: usize, effort: &mut Effort) -> Result<ControlledCrown, QuasiError> {
    let active: Vec<usize> = (0..c.a.len()).filter(|&i| !c.successors(i).is_empty()).collect();
    let level = active.first().map(|&i| c.lambda[i]);
    if active.iter().any(|&i| Some(c.lambda[i]) != level) {
        return Err(QuasiError::Precondition("levels of A are not constant".into()));
    }
    let n = c.max_out_degree();
    if effort.mode == Mode::Guaranteed {
        let pairs_ok = c.b.iter().all(|x| c.b.iter().all(|y| x == y || common(c, x, y).is_some()));
        if !pairs_ok || below(c.b.len(), lemma0_bound(q as u64, &BigUint::from(n))) {
            return Err(QuasiError::Precondition("lemma 0 size or common-neighbour condition fails".into()));
        }
    }
    if q == 0 {
        return Err(QuasiError::Precondition("crown order must be positive".into()));
    }
    if q == 1 {
        let b = c.b.iter().next().ok_or_else(|| failure("empty B"))?;
        return checked(c, ControlledCrown { b: vec![b], a: Vec::new() });
    }

    // Connector and colour (red = base outside the pair) for pairs met in the loop.
    let mut conn: HashMap<(usize, usize), (usize, bool)> = HashMap::new();
    let (mut red, mut yellow) = (Vec::new(), Vec::new());
    let mut pool: Vec<usize> = c.b.iter().collect();
    while !pool.is_empty() {
        let v = pool.remove(0);
        if pool.is_empty() {
            // A last vertex has red connections to all of `red` and yellow ones to all of `yellow`.
            red.push(v);
            yellow.push(v);
            break;
        }
        let (mut d_red, mut d_yellow) = (Vec::new(), Vec::new());
        while let Some(&u) = pool.first() {
            effort.spend(1)?;
            let Some(a) = common(c, v, u) else {
                pool.remove(0);
                continue;
            };
            let is_red = c.beta[a] != Some(v) && c.beta[a] != Some(u);
            conn.insert((v.min(u), v.max(u)), (a, is_red));
            let out = c.successors(a);
            pool.retain(|x| !out.contains(x));
            if is_red {
                d_red.push(u);
            } else {
                d_yellow.push(u);
            }
        }
        if d_red.len() >= d_yellow.len() {
            red.push(v);
            pool = d_red;
        } else {
            yellow.push(v);
            pool = d_yellow;
        }
    }

    let connectors: HashMap<(usize, usize), usize> = conn.iter().map(|(&k, &(a, _))| (k, a)).collect();
    let mut last = failure("lemma 0: neither colour class is large enough");
    if red.len() >= q {
        let mut gamma = EdgeLabels::new();
        for (i, &x) in red.iter().enumerate() {
            for &y in &red[i + 1..] {
                let (a, _) = conn[&(x.min(y), x.max(y))];
                if let Some(z) = c.beta[a] {
                    gamma.insert((x.min(y), x.max(y)), z);
                }
            }
        }
        match controlled_clique_extract(&red, &gamma, q, effort) {
            Ok(h) => match assemble(&h, &connectors).map(|cr| checked(c, cr)) {
                Some(Ok(cr)) => return Ok(cr),
                Some(Err(e)) => last = e,
                None => {}
            },
            Err(e @ QuasiError::BudgetExhausted) => return Err(e),
            Err(e) => last = e,
        }
    }
    if yellow.len() >= q {
        let gamma = yellow_labels(c, &yellow, &conn, level.unwrap_or(0));
        match controlled_clique_extract(&yellow, &gamma, q, effort) {
            Ok(h) => match assemble(&h, &connectors).map(|cr| checked(c, cr)) {
                Some(Ok(cr)) => return Ok(cr),
                Some(Err(e)) => last = e,
                None => {}
            },
            Err(e @ QuasiError::BudgetExhausted) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn common(c: &ControlledBipartite, x: usize, y: usize) -> Option<usize> {
    let py = c.predecessors(y);
    c.predecessors(x).iter().copied().find(|a| py.contains(a))
}

/// Labels for the yellow class: for the pair `{u, v}` with connector `a` based at `u`,
/// the level-`level` vertex `z` on the label of `av` points to the other end `w` of the
/// yellow connection that `z` itself provides, unless `w = u`.
fn yellow_labels(
    c: &ControlledBipartite,
    yellow: &[usize],
    conn: &HashMap<(usize, usize), (usize, bool)>,
    level: usize,
) -> EdgeLabels {
    let mut by_ground: HashMap<usize, (usize, usize)> = HashMap::new();
    for (i, &x) in yellow.iter().enumerate() {
        for &y in &yellow[i + 1..] {
            if let Some(&(a, false)) = conn.get(&(x.min(y), x.max(y))) {
                by_ground.insert(c.a[a], (x, y));
            }
        }
    }
    let mut gamma = EdgeLabels::new();
    for (i, &x) in yellow.iter().enumerate() {
        for &y in &yellow[i + 1..] {
            let key = (x.min(y), x.max(y));
            let Some(&(a, false)) = conn.get(&key) else { continue };
            let u = c.beta[a].expect("yellow connectors have bases");
            let v = if u == x { y } else { x };
            let Some(e2) = c.edge(a, v) else { continue };
            let Some(&z) = e2.eta.iter().find(|&&z| c.ground_lambda[z] == level) else { continue };
            let Some(&(p, s)) = by_ground.get(&z) else { continue };
            let w = if p == v { s } else { p };
            if w != u && w != v {
                gamma.insert(key, w);
            }
        }
    }
    gamma
}

/// One of: an A-vertex with `n + 1` successors, `p` pairwise predecessor-disjoint
/// B-vertices, or a controlled crown of order `q` found in a single-level bucket.
pub fn lemma1_extract(
    c: &ControlledBipartite,
    p: usize,
    q: usize,
    n: usize,
    effort: &mut Effort,
) -> Result<Lemma1Outcome, QuasiError> {
    if let Some(a) = (0..c.a.len()).find(|&a| c.successors(a).len() > n) {
        return Ok(Lemma1Outcome::HighDegree { a, successors: c.successors(a)[..=n].to_vec() });
    }
    let r = c.r;
    let rounds = if effort.mode == Mode::Guaranteed {
        let bound = lemma1_bound(r as u64, &BigUint::from(p), q as u64, &BigUint::from(n));
        if bound.as_ref().map_or(true, |b| BigUint::from(c.b.len()) <= *b) {
            return Err(QuasiError::Precondition("lemma 1 needs |B| > f(r, p, q, n)".into()));
        }
        let g = lemma0_bound(q as u64, &BigUint::from(n))?;
        usize::try_from(BigUint::from(p) + g * (r + 2)).unwrap_or(usize::MAX)
    } else {
        usize::MAX
    };
    let mut pool: Vec<usize> = c.b.iter().collect();
    let mut independent: Vec<usize> = Vec::new();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); r + 2];
    let mut round = 0;
    while !pool.is_empty() && round < rounds {
        round += 1;
        effort.spend(1)?;
        let v = pool.remove(0);
        let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); r + 2];
        for &a in c.predecessors(v) {
            let out = c.successors(a);
            let bucket = &mut by_level[c.lambda[a].min(r + 1)];
            bucket.extend(pool.iter().copied().filter(|x| out.contains(x)));
        }
        for b in &mut by_level {
            b.sort_unstable();
            b.dedup();
        }
        let rest: Vec<usize> = pool.iter().copied().filter(|x| by_level.iter().all(|b| !b.contains(x))).collect();
        if pool.is_empty() {
            // The last vertex shares a level-t predecessor with every member of every bucket.
            for b in &mut buckets {
                b.push(v);
            }
        }
        if pool.is_empty() || rest.len() * (r + 3) > pool.len() {
            pool = rest;
            independent.push(v);
            if independent.len() == p {
                let set: VertexSet = independent.iter().copied().collect();
                debug_assert!(c.is_one_scattered(&[], &set));
                return Ok(Lemma1Outcome::Scattered(ControlledScattered { deleted: Vec::new(), set }));
            }
        } else {
            let t = (0..r + 2).max_by_key(|&t| (by_level[t].len(), std::cmp::Reverse(t))).unwrap();
            pool = std::mem::take(&mut by_level[t]);
            buckets[t].push(v);
        }
    }
    let mut order: Vec<usize> = (0..r + 2).filter(|&t| buckets[t].len() >= q).collect();
    order.sort_by_key(|&t| (std::cmp::Reverse(buckets[t].len()), t));
    let mut last = failure("lemma 1: no outcome reached");
    for t in order {
        let keep_a: Vec<bool> = c.lambda.iter().map(|&l| l == t).collect();
        let sub = c.restrict(&keep_a, &buckets[t].iter().copied().collect(), false);
        match lemma0_extract(&sub, q, effort) {
            Ok(crown) => return checked(c, crown).map(Lemma1Outcome::Crown),
            Err(e @ QuasiError::BudgetExhausted) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// A 1-scattered set of size `p` after deleting at most `C(q, 2)` A-vertices, or a
/// controlled crown of order `q`, by peeling high-degree A-vertices.
pub fn rcdbg_extract(c: &ControlledBipartite, p: usize, q: usize, effort: &mut Effort) -> Result<RcdbgOutcome, QuasiError> {
    if q == 0 {
        return Err(QuasiError::Precondition("crown order must be positive".into()));
    }
    let rounds = q * (q - 1) / 2;
    let (r, pb) = (c.r as u64, BigUint::from(p));
    if effort.mode == Mode::Guaranteed && below(c.b.len(), rcdbg_bound(r, &pb, q as u64)) {
        return Err(QuasiError::Precondition("rcdbg needs |B| >= F(r, p, q)".into()));
    }
    let mut peeled: Vec<usize> = Vec::new();
    let mut pool = c.b.clone();
    for i in 0..rounds {
        effort.spend(1)?;
        let gain = |a: usize| {
            c.successors(a).iter().filter(|&&x| pool.contains(x) && c.beta[a] != Some(x)).count()
        };
        let residual = |peeled: &[usize], pool: &VertexSet, effort: &mut Effort, n: usize| {
            let keep_a: Vec<bool> = (0..c.a.len()).map(|a| !peeled.contains(&a)).collect();
            let sub = c.restrict(&keep_a, pool, true);
            let n = n.max(sub.max_out_degree());
            lemma1_extract(&sub, p, q, n, effort)
        };
        let candidate = match effort.mode {
            Mode::Guaranteed => {
                let th = peel_bound(r, &pb, q as u64, (rounds - i - 1) as u64)?;
                (0..c.a.len()).find(|&a| !peeled.contains(&a) && BigUint::from(gain(a)) > th).ok_or(th)
            }
            Mode::BestEffort => {
                match residual(&peeled, &pool, effort, 0) {
                    Ok(Lemma1Outcome::Scattered(s)) => return finish_scattered(c, peeled, s),
                    Ok(Lemma1Outcome::Crown(cr)) => return checked(c, cr).map(RcdbgOutcome::Crown),
                    Ok(Lemma1Outcome::HighDegree { .. }) => unreachable!("degree bound equals the maximum"),
                    Err(e @ QuasiError::BudgetExhausted) => return Err(e),
                    Err(_) => {}
                }
                (0..c.a.len())
                    .filter(|a| !peeled.contains(a))
                    .map(|a| (gain(a), a))
                    .filter(|&(g, _)| g >= q)
                    .max_by_key(|&(g, a)| (g, std::cmp::Reverse(a)))
                    .map(|(_, a)| a)
                    .ok_or(BigUint::ZERO)
            }
        };
        match candidate {
            Ok(a) => {
                pool = c.successors(a).iter().copied().filter(|&x| pool.contains(x) && c.beta[a] != Some(x)).collect();
                peeled.push(a);
            }
            Err(th) => {
                if effort.mode == Mode::BestEffort {
                    return Err(failure("rcdbg: nothing left to peel"));
                }
                let n = usize::try_from(th).unwrap_or(usize::MAX);
                return match residual(&peeled, &pool, effort, n)? {
                    Lemma1Outcome::Scattered(s) => finish_scattered(c, peeled, s),
                    Lemma1Outcome::Crown(cr) => checked(c, cr).map(RcdbgOutcome::Crown),
                    Lemma1Outcome::HighDegree { .. } => Err(QuasiError::Internal("peeling threshold violated".into())),
                };
            }
        }
    }
    let b: Vec<usize> = pool.iter().take(q).collect();
    if b.len() < q {
        if effort.mode == Mode::BestEffort {
            let keep_a: Vec<bool> = (0..c.a.len()).map(|a| !peeled.contains(&a)).collect();
            let sub = c.restrict(&keep_a, &pool, true);
            if let Ok(Lemma1Outcome::Scattered(s)) = lemma1_extract(&sub, p, q, sub.max_out_degree(), effort) {
                return finish_scattered(c, peeled, s);
            }
        }
        return Err(failure("rcdbg: peeled pool smaller than q"));
    }
    checked(c, ControlledCrown { b, a: peeled }).map(RcdbgOutcome::Crown)
}

fn finish_scattered(c: &ControlledBipartite, peeled: Vec<usize>, s: ControlledScattered) -> Result<RcdbgOutcome, QuasiError> {
    let mut deleted = peeled;
    deleted.extend(s.deleted);
    if !c.is_one_scattered(&deleted, &s.set) {
        return Err(QuasiError::Internal("scattered outcome failed verification".into()));
    }
    Ok(RcdbgOutcome::Scattered(ControlledScattered { deleted, set: s.set }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasiwide::controlled::ControlledEdge;

    /// Plain instance: A-copies on ground `0..na`, B on ground `na..na+nb`, empty labels.
    fn plain(r: usize, na: usize, nb: usize, edges: &[(usize, usize)], beta: &[Option<usize>], lambda: &[usize]) -> ControlledBipartite {
        let n = na + nb;
        let edges = edges.iter().map(|&(a, b)| ControlledEdge { a, b: na + b, eta: Vec::new() }).collect();
        ControlledBipartite::new(
            r,
            (0..na).collect(),
            (na..n).collect(),
            edges,
            beta.iter().map(|b| b.map(|x| na + x)).collect(),
            lambda.to_vec(),
            vec![None; n],
            vec![0; n],
        )
        .unwrap()
    }

    fn eff() -> Effort {
        Effort::best_effort(1 << 20)
    }

    /// A-vertex `k` joins the `k`-th pair of `0..nb` in lexicographic order.
    fn pair_edges(nb: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut k = 0;
        for i in 0..nb {
            for j in i + 1..nb {
                out.push((k, i));
                out.push((k, j));
                k += 1;
            }
        }
        out
    }

    #[test]
    fn lemma0_red_connections() {
        let edges = pair_edges(3);
        let c = plain(1, 3, 3, &edges, &[None; 3], &[2; 3]);
        let cr = lemma0_extract(&c, 3, &mut eff()).unwrap();
        assert!(c.is_controlled_crown(&cr));
        assert_eq!(cr.order(), 3);
    }

    #[test]
    fn lemma0_yellow_connection() {
        let c = plain(1, 1, 2, &[(0, 0), (0, 1)], &[Some(0)], &[1]);
        let cr = lemma0_extract(&c, 2, &mut eff()).unwrap();
        assert_eq!(cr.a, vec![0]);
        assert!(c.is_controlled_crown(&cr));
    }

    #[test]
    fn lemma0_mixed_levels_rejected() {
        let c = plain(1, 2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)], &[None, Some(0)], &[2, 1]);
        assert!(matches!(lemma0_extract(&c, 2, &mut eff()), Err(QuasiError::Precondition(_))));
    }

    #[test]
    fn lemma0_shared_connector_fails() {
        // Every connector reaches all principals, so one round empties the pool.
        let edges = vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (1, 1), (2, 1), (2, 2), (2, 0)];
        let c = plain(1, 3, 3, &edges, &[Some(2), Some(1), Some(0)], &[1; 3]);
        assert!(lemma0_extract(&c, 3, &mut eff()).is_err());
    }

    #[test]
    fn lemma1_high_degree() {
        let c = plain(0, 1, 3, &[(0, 0), (0, 1), (0, 2)], &[None], &[1]);
        match lemma1_extract(&c, 2, 2, 2, &mut eff()).unwrap() {
            Lemma1Outcome::HighDegree { a, successors } => {
                assert_eq!(a, 0);
                assert_eq!(successors.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lemma1_without_a_is_scattered() {
        let c = plain(0, 0, 4, &[], &[], &[]);
        match lemma1_extract(&c, 3, 2, 1, &mut eff()).unwrap() {
            Lemma1Outcome::Scattered(s) => assert_eq!(s.set.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lemma1_funnels_into_one_level() {
        let edges = pair_edges(4);
        let c = plain(0, 6, 4, &edges, &[None; 6], &[1; 6]);
        match lemma1_extract(&c, 4, 2, 2, &mut eff()).unwrap() {
            Lemma1Outcome::Crown(cr) => assert!(c.is_controlled_crown(&cr) && cr.order() == 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rcdbg_peels_complete_bipartite() {
        // Four A-vertices reach B-vertices 0..4 and are based on B-vertex 4.
        let edges: Vec<(usize, usize)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let c = plain(1, 4, 5, &edges, &[Some(4); 4], &[1; 4]);
        match rcdbg_extract(&c, 3, 3, &mut eff()).unwrap() {
            RcdbgOutcome::Crown(cr) => {
                assert_eq!(cr.a, vec![0, 1, 2]);
                assert!(c.is_controlled_crown(&cr));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rcdbg_without_a() {
        let c = plain(0, 0, 5, &[], &[], &[]);
        match rcdbg_extract(&c, 4, 3, &mut eff()).unwrap() {
            RcdbgOutcome::Scattered(s) => assert!(s.deleted.is_empty() && s.set.len() == 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rcdbg_deletes_a_hub() {
        // One hub reaches everything; pendant A-vertices each reach a single B-vertex.
        let mut edges: Vec<(usize, usize)> = (0..4).map(|b| (0, b)).collect();
        edges.extend((0..4).map(|b| (b + 1, b)));
        let c = plain(0, 5, 4, &edges, &[None; 5], &[1; 5]);
        match rcdbg_extract(&c, 4, 3, &mut eff()).unwrap() {
            RcdbgOutcome::Scattered(s) => {
                assert_eq!(s.deleted, vec![0]);
                assert!(c.is_one_scattered(&s.deleted, &s.set));
            }
            other => panic!("{other:?}"),
        }
    }
}
