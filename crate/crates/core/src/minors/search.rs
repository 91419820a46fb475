//! Minor search by guessing edge images and then completing branch sets with
//! connecting paths: product-DAG paths on acyclic hosts, explicit routing otherwise.

use std::collections::HashSet;

use super::model::{is_valid_model, BranchSet, DirectedModel};
use super::paths::{dag_disjoint_paths, dag_disjoint_paths_bounded, IntervalPartition};
use super::MinorError;
use crate::graph::{Digraph, Direction, VertexSet};
use crate::iso::automorphisms;
use crate::par;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Completion {
    /// Product-DAG paths; host must be acyclic.
    Dag,
    /// Simple-path routing with induced branch sets.
    Route,
}

struct Ctx<'a> {
    pattern: &'a Digraph,
    host: &'a Digraph,
    pedges: Vec<(usize, usize)>,
    order: Vec<usize>,
    depth: Option<usize>,
    dist: Vec<Vec<Option<usize>>>,
    /// Pattern automorphisms as permutations of edge indices.
    edge_auts: Vec<Vec<usize>>,
    mode: Completion,
}

impl Ctx<'_> {
    fn close(&self, a: usize, b: usize) -> bool {
        self.dist[a][b].is_some_and(|d| self.depth.is_none_or(|r| d <= r))
    }
}

#[derive(Clone)]
struct Partial {
    images: Vec<Option<(usize, usize)>>,
    owner: Vec<Option<usize>>,
    refs: Vec<usize>,
    ins: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
}

impl Partial {
    fn new(ctx: &Ctx) -> Self {
        let h = ctx.pattern.n();
        Partial {
            images: vec![None; ctx.pedges.len()],
            owner: vec![None; ctx.host.n()],
            refs: vec![0; ctx.host.n()],
            ins: vec![Vec::new(); h],
            outs: vec![Vec::new(); h],
        }
    }

    fn claim(&mut self, x: usize, v: usize) {
        self.owner[x] = Some(v);
        self.refs[x] += 1;
    }

    fn release(&mut self, x: usize) {
        self.refs[x] -= 1;
        if self.refs[x] == 0 {
            self.owner[x] = None;
        }
    }

    fn usable(&self, x: usize, v: usize) -> bool {
        self.owner[x].is_none_or(|o| o == v)
    }

    fn admits(&self, ctx: &Ctx, e: usize, x: usize, y: usize) -> bool {
        let (u, w) = ctx.pedges[e];
        self.usable(x, u)
            && self.usable(y, w)
            && self.ins[u].iter().all(|&a| ctx.close(a, x))
            && self.outs[w].iter().all(|&b| ctx.close(y, b))
    }

    fn push(&mut self, ctx: &Ctx, e: usize, x: usize, y: usize) {
        let (u, w) = ctx.pedges[e];
        self.images[e] = Some((x, y));
        self.claim(x, u);
        self.claim(y, w);
        self.outs[u].push(x);
        self.ins[w].push(y);
    }

    fn pop(&mut self, ctx: &Ctx, e: usize) {
        let (u, w) = ctx.pedges[e];
        let (x, y) = self.images[e].take().unwrap();
        self.outs[u].pop();
        self.ins[w].pop();
        self.release(x);
        self.release(y);
    }
}

/// Edge order in which every next edge touches as many already-touched pattern vertices as possible.
fn guess_order(pattern: &Digraph, pedges: &[(usize, usize)]) -> Vec<usize> {
    let mut touched = vec![false; pattern.n()];
    let mut used = vec![false; pedges.len()];
    let mut order = Vec::with_capacity(pedges.len());
    for _ in 0..pedges.len() {
        let e = (0..pedges.len())
            .filter(|&e| !used[e])
            .max_by_key(|&e| {
                let (u, w) = pedges[e];
                (touched[u] as usize + touched[w] as usize, std::cmp::Reverse(e))
            })
            .unwrap();
        used[e] = true;
        touched[pedges[e].0] = true;
        touched[pedges[e].1] = true;
        order.push(e);
    }
    order
}

fn edge_automorphisms(pattern: &Digraph, pedges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    if pedges.is_empty() {
        return Vec::new();
    }
    automorphisms(pattern)
        .into_iter()
        .map(|sigma| {
            // Entry e is the index of sigma^{-1}(e).
            let mut inv = vec![0; sigma.len()];
            for (i, &s) in sigma.iter().enumerate() {
                inv[s] = i;
            }
            pedges
                .iter()
                .map(|&(a, b)| pedges.binary_search(&(inv[a], inv[b])).unwrap())
                .collect::<Vec<usize>>()
        })
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .collect()
}

/// Keeps only the lexicographically least image tuple of every automorphism orbit.
fn is_orbit_leader(ctx: &Ctx, images: &[(usize, usize)]) -> bool {
    ctx.edge_auts.iter().all(|perm| {
        let permuted = perm.iter().map(|&j| images[j]);
        images.iter().copied().cmp(permuted) != std::cmp::Ordering::Greater
    })
}

fn search(
    pattern: &Digraph,
    host: &Digraph,
    depth: Option<usize>,
    mode: Completion,
) -> Option<DirectedModel> {
    let h = pattern.n();
    if h > host.n() || pattern.edge_count() > host.edge_count() {
        return None;
    }
    let pedges: Vec<(usize, usize)> = pattern.edges().collect();
    let ctx = Ctx {
        pattern,
        host,
        order: guess_order(pattern, &pedges),
        edge_auts: edge_automorphisms(pattern, &pedges),
        pedges,
        depth,
        dist: host.distance_matrix(),
        mode,
    };
    let base = Partial::new(&ctx);
    if ctx.order.is_empty() {
        return complete(&ctx, &base);
    }
    let first = ctx.order[0];
    let starts: Vec<(usize, usize)> = host.edges().filter(|&(x, y)| base.admits(&ctx, first, x, y)).collect();
    par::find_map_first(&starts, |&(x, y)| {
        let mut p = base.clone();
        p.push(&ctx, first, x, y);
        guess(&ctx, &mut p, 1)
    })
}

fn guess(ctx: &Ctx, p: &mut Partial, idx: usize) -> Option<DirectedModel> {
    if idx == ctx.order.len() {
        let images: Vec<(usize, usize)> = p.images.iter().map(|i| i.unwrap()).collect();
        if !is_orbit_leader(ctx, &images) {
            return None;
        }
        return complete(ctx, p);
    }
    let e = ctx.order[idx];
    let (u, _) = ctx.pedges[e];
    for x in 0..ctx.host.n() {
        if !p.usable(x, u) {
            continue;
        }
        for &y in ctx.host.out_neighbors(x) {
            if p.admits(ctx, e, x, y) {
                p.push(ctx, e, x, y);
                let found = guess(ctx, p, idx + 1);
                p.pop(ctx, e);
                if found.is_some() {
                    return found;
                }
            }
        }
    }
    None
}

/// Terminal role of a pattern vertex once edge images are fixed.
#[derive(Clone, Debug)]
struct Plan {
    ins: Vec<usize>,
    outs: Vec<usize>,
    /// Chosen source (when there are no ins) or sink (when there are no outs).
    anchor: Option<usize>,
}

impl Plan {
    fn connections(&self) -> Vec<(usize, usize)> {
        let mut c = Vec::new();
        match (self.ins.is_empty(), self.outs.is_empty()) {
            (false, false) => {
                for &a in &self.ins {
                    for &b in &self.outs {
                        c.push((a, b));
                    }
                }
            }
            (true, false) => c.extend(self.outs.iter().map(|&b| (self.anchor.unwrap(), b))),
            (false, true) => c.extend(self.ins.iter().map(|&a| (a, self.anchor.unwrap()))),
            (true, true) => c.push((self.anchor.unwrap(), self.anchor.unwrap())),
        }
        c.sort_unstable();
        c.dedup();
        c
    }

    fn source_sink(&self) -> (usize, usize) {
        let s = self.ins.first().copied().or(self.anchor).unwrap();
        let t = self.outs.first().copied().or(self.anchor).unwrap();
        (s, t)
    }
}

fn complete(ctx: &Ctx, p: &Partial) -> Option<DirectedModel> {
    let h = ctx.pattern.n();
    let mut plans: Vec<Plan> = (0..h)
        .map(|v| {
            let mut ins = p.ins[v].clone();
            let mut outs = p.outs[v].clone();
            ins.sort_unstable();
            ins.dedup();
            outs.sort_unstable();
            outs.dedup();
            Plan { ins, outs, anchor: None }
        })
        .collect();
    // Vertices without any incident pattern edge are placed last, on leftover host vertices.
    let (isolated, anchored): (Vec<usize>, Vec<usize>) = (0..h)
        .filter(|&v| plans[v].ins.is_empty() || plans[v].outs.is_empty())
        .partition(|&v| plans[v].ins.is_empty() && plans[v].outs.is_empty());
    let images: Vec<(usize, usize)> = p.images.iter().map(|i| i.unwrap()).collect();
    let mut owner = p.owner.clone();
    let job = Job { images: &images, isolated: &isolated };
    choose_anchors(ctx, &job, &mut plans, &anchored, 0, &mut owner)
}

fn anchor_candidates(ctx: &Ctx, plan: &Plan, v: usize, owner: &[Option<usize>]) -> Vec<usize> {
    let fits = |x: usize| {
        if plan.ins.is_empty() {
            plan.outs.iter().all(|&b| ctx.close(x, b))
        } else {
            plan.ins.iter().all(|&a| ctx.close(a, x))
        }
    };
    let mine = (0..ctx.host.n()).filter(|&x| owner[x] == Some(v) && fits(x));
    let free = (0..ctx.host.n()).filter(|&x| owner[x].is_none() && fits(x));
    mine.chain(free).collect()
}

struct Job<'a> {
    images: &'a [(usize, usize)],
    isolated: &'a [usize],
}

fn choose_anchors(
    ctx: &Ctx,
    job: &Job,
    plans: &mut [Plan],
    anchored: &[usize],
    i: usize,
    owner: &mut Vec<Option<usize>>,
) -> Option<DirectedModel> {
    if i == anchored.len() {
        return connect(ctx, job, plans, owner);
    }
    let v = anchored[i];
    for x in anchor_candidates(ctx, &plans[v], v, owner) {
        let fresh = owner[x].is_none();
        owner[x] = Some(v);
        plans[v].anchor = Some(x);
        let found = choose_anchors(ctx, job, plans, anchored, i + 1, owner);
        if fresh {
            owner[x] = None;
        }
        plans[v].anchor = None;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Routes every connection, then places isolated pattern vertices. If the first
/// routing leaves too few free vertices, isolated vertices are fixed up front instead.
fn connect(ctx: &Ctx, job: &Job, plans: &mut [Plan], owner: &[Option<usize>]) -> Option<DirectedModel> {
    for &v in job.isolated {
        plans[v].anchor = None;
    }
    let sets = route(ctx, plans, owner)?;
    let mut taken = vec![false; ctx.host.n()];
    for x in sets.iter().flat_map(|s| s.iter()) {
        taken[x] = true;
    }
    let free: Vec<usize> = (0..ctx.host.n()).filter(|&x| !taken[x]).collect();
    if free.len() >= job.isolated.len() {
        for (&v, &x) in job.isolated.iter().zip(&free) {
            plans[v].anchor = Some(x);
        }
        let mut sets = sets;
        for &v in job.isolated {
            sets[v] = VertexSet::singleton(plans[v].anchor.unwrap());
        }
        return build(ctx, job.images, plans, sets);
    }
    let free: Vec<usize> = (0..ctx.host.n()).filter(|&x| owner[x].is_none()).collect();
    let mut chosen = Vec::new();
    place_isolated(ctx, job, plans, owner, &free, 0, &mut chosen)
}

fn place_isolated(
    ctx: &Ctx,
    job: &Job,
    plans: &mut [Plan],
    owner: &[Option<usize>],
    free: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
) -> Option<DirectedModel> {
    if chosen.len() == job.isolated.len() {
        let mut own = owner.to_vec();
        for (&v, &x) in job.isolated.iter().zip(chosen.iter()) {
            own[x] = Some(v);
            plans[v].anchor = Some(x);
        }
        let sets = route(ctx, plans, &own)?;
        return build(ctx, job.images, plans, sets);
    }
    for k in from..free.len() {
        chosen.push(free[k]);
        let found = place_isolated(ctx, job, plans, owner, free, k + 1, chosen);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn build(ctx: &Ctx, images: &[(usize, usize)], plans: &[Plan], sets: Vec<VertexSet>) -> Option<DirectedModel> {
    let branches: Vec<BranchSet> = plans
        .iter()
        .enumerate()
        .map(|(v, plan)| {
            let (s, t) = plan.source_sink();
            let vs = if sets[v].is_empty() { VertexSet::singleton(s) } else { sets[v].clone() };
            BranchSet::induced(ctx.host, vs, s, t)
        })
        .collect();
    let model = DirectedModel { branches, edge_images: images.to_vec(), depth: ctx.depth };
    if is_valid_model(ctx.pattern, ctx.host, &model) {
        Some(model)
    } else {
        debug_assert!(false, "completion produced an invalid model");
        None
    }
}

/// Per-pattern-vertex host vertex sets realising all connections, or `None`.
fn route(ctx: &Ctx, plans: &[Plan], owner: &[Option<usize>]) -> Option<Vec<VertexSet>> {
    let h = plans.len();
    let mut conns: Vec<(usize, usize, usize)> = Vec::new();
    for (v, plan) in plans.iter().enumerate() {
        if plan.ins.is_empty() && plan.outs.is_empty() && plan.anchor.is_none() {
            continue;
        }
        for (a, b) in plan.connections() {
            conns.push((v, a, b));
        }
    }
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); h];
    for (x, o) in owner.iter().enumerate() {
        if let Some(v) = *o {
            sets[v].push(x);
        }
    }
    match ctx.mode {
        Completion::Dag => {
            let pairs: Vec<(usize, usize)> = conns.iter().map(|&(_, a, b)| (a, b)).collect();
            let mut sizes = Vec::new();
            for (i, c) in conns.iter().enumerate() {
                if i == 0 || conns[i - 1].0 != c.0 {
                    sizes.push(0);
                }
                *sizes.last_mut().unwrap() += 1;
            }
            let part = IntervalPartition::from_sizes(&sizes).ok()?;
            let paths = match ctx.depth {
                Some(r) => dag_disjoint_paths_bounded(ctx.host, &pairs, &part, r),
                None => dag_disjoint_paths(ctx.host, &pairs, &part),
            }
            .ok()??;
            // Paths of one pattern vertex must also avoid terminals owned by others.
            for (&(v, _, _), path) in conns.iter().zip(&paths) {
                for &x in &path.vertices {
                    if owner[x].is_some_and(|o| o != v) {
                        return None;
                    }
                    sets[v].push(x);
                }
            }
            let mut claimed = vec![usize::MAX; ctx.host.n()];
            for (v, s) in sets.iter().enumerate() {
                for &x in s {
                    if claimed[x] != usize::MAX && claimed[x] != v {
                        return None;
                    }
                    claimed[x] = v;
                }
            }
        }
        Completion::Route => {
            let mut own: Vec<Option<usize>> = owner.to_vec();
            let limit = ctx.depth.unwrap_or(ctx.host.n());
            if !route_rec(ctx.host, &conns, 0, &mut own, limit) {
                return None;
            }
            sets = vec![Vec::new(); h];
            for (x, o) in own.iter().enumerate() {
                if let Some(v) = *o {
                    sets[v].push(x);
                }
            }
        }
    }
    Some(sets.into_iter().map(VertexSet::from).collect())
}

fn induced_distance(host: &Digraph, own: &[Option<usize>], v: usize, a: usize, b: usize) -> Option<usize> {
    let allowed: Vec<bool> = own.iter().map(|&o| o == Some(v)).collect();
    host.bfs(&[a], Direction::Out, None, Some(&allowed))[b]
}

fn route_rec(host: &Digraph, conns: &[(usize, usize, usize)], idx: usize, own: &mut Vec<Option<usize>>, limit: usize) -> bool {
    let Some(&(v, a, b)) = conns.get(idx) else { return true };
    if induced_distance(host, own, v, a, b).is_some_and(|d| d <= limit) {
        return route_rec(host, conns, idx + 1, own, limit);
    }
    let allowed: Vec<bool> = own.iter().map(|&o| o.is_none_or(|x| x == v)).collect();
    let to_b = host.bfs(&[b], Direction::In, Some(limit), Some(&allowed));
    if to_b[a].is_none() {
        return false;
    }
    let mut path = vec![a];
    let mut on_path = vec![false; host.n()];
    on_path[a] = true;
    let mut tried: HashSet<Vec<usize>> = HashSet::new();
    extend(host, conns, idx, own, limit, &allowed, &to_b, &mut path, &mut on_path, &mut tried)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    host: &Digraph,
    conns: &[(usize, usize, usize)],
    idx: usize,
    own: &mut Vec<Option<usize>>,
    limit: usize,
    allowed: &[bool],
    to_b: &[Option<usize>],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    tried: &mut HashSet<Vec<usize>>,
) -> bool {
    let (v, _, b) = conns[idx];
    let cur = *path.last().unwrap();
    if cur == b {
        let fresh: Vec<usize> = path.iter().copied().filter(|&x| own[x].is_none()).collect();
        if !tried.insert(fresh.clone()) {
            return false;
        }
        for &x in &fresh {
            own[x] = Some(v);
        }
        if route_rec(host, conns, idx + 1, own, limit) {
            return true;
        }
        for &x in &fresh {
            own[x] = None;
        }
        return false;
    }
    let used = path.len() - 1;
    for &w in host.out_neighbors(cur) {
        if !allowed[w] || on_path[w] || to_b[w].is_none_or(|d| used + 1 + d > limit) {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        let ok = extend(host, conns, idx, own, limit, allowed, to_b, path, on_path, tried);
        on_path[w] = false;
        path.pop();
        if ok {
            return true;
        }
    }
    false
}

/// Model of `pattern` in the acyclic `host`, or `None`. Cyclic patterns are rejected at once.
pub fn dag_minor_check(pattern: &Digraph, host: &Digraph) -> Result<Option<DirectedModel>, MinorError> {
    host.topological_order().map_err(MinorError::NotADag)?;
    if !pattern.is_dag() {
        return Ok(None);
    }
    Ok(run(pattern, host, None, Completion::Dag))
}

/// Depth-`r` model of `pattern` in `host`, or `None`.
pub fn shallow_minor_check(pattern: &Digraph, host: &Digraph, r: usize) -> Option<DirectedModel> {
    let mode = if host.is_dag() { Completion::Dag } else { Completion::Route };
    run(pattern, host, Some(r), mode)
}

/// Model of `pattern` in an arbitrary `host`, by exhaustive routing.
pub fn general_minor_check(pattern: &Digraph, host: &Digraph) -> Option<DirectedModel> {
    run(pattern, host, None, Completion::Route)
}

fn run(pattern: &Digraph, host: &Digraph, depth: Option<usize>, mode: Completion) -> Option<DirectedModel> {
    search(pattern, host, depth, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::crown;
    use crate::graph::UndirectedGraph;
    use crate::minors::verify_model;

    fn subdivide(g: &Digraph) -> Digraph {
        let n = g.n();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let pairs = edges.iter().enumerate().flat_map(|(i, &(u, v))| [(u, n + i), (n + i, v)]);
        Digraph::from_edges(n + edges.len(), pairs).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        let e: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        UndirectedGraph::from_edges(n, e).unwrap().bidirect()
    }

    #[test]
    fn subdivided_crown_needs_depth_one() {
        let s3 = crown(3).unwrap().graph;
        let host = subdivide(&s3);
        assert!(shallow_minor_check(&s3, &host, 0).is_none());
        let m = shallow_minor_check(&s3, &host, 1).unwrap();
        assert!(verify_model(&s3, &host, &m).is_valid());
        let m = dag_minor_check(&s3, &host).unwrap().unwrap();
        assert!(verify_model(&s3, &host, &m).is_valid());
    }

    #[test]
    fn cycle_pattern_in_dag() {
        let two = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let host = crown(3).unwrap().graph;
        assert_eq!(dag_minor_check(&two, &host), Ok(None));
        assert!(general_minor_check(&two, &host).is_none());
        assert!(matches!(dag_minor_check(&host, &two), Err(MinorError::NotADag(_))));
    }

    #[test]
    fn bidirected_cliques() {
        let (k3, k4) = (complete(3), complete(4));
        let m = general_minor_check(&k3, &k4).unwrap();
        assert!(verify_model(&k3, &k4, &m).is_valid());
        assert!(general_minor_check(&k4, &k3).is_none());
    }

    #[test]
    fn identity_on_itself() {
        let g = crown(2).unwrap().graph;
        assert!(general_minor_check(&g, &g).is_some());
        assert!(shallow_minor_check(&g, &g, 0).is_some());
    }
}
