use std::collections::HashMap;

use num_bigint::BigUint;

use super::bounds::clique_bound;
use super::{Effort, Mode, QuasiError};

/// Largest complete graph accepted by [`controlled_clique_extract`].
pub const CLIQUE_MAX_VERTICES: usize = 24;

/// Labels `gamma` on the edges of the complete graph on `vertices`, keyed by
/// `(min, max)`; missing keys mean an empty label.
pub type EdgeLabels = HashMap<(usize, usize), usize>;

fn label(gamma: &EdgeLabels, x: usize, y: usize) -> Option<usize> {
    gamma.get(&(x.min(y), x.max(y))).copied()
}

/// `n` vertices `H` with `gamma(e) ∉ H` for every edge `e` inside `H`.
pub fn controlled_clique_extract(
    vertices: &[usize],
    gamma: &EdgeLabels,
    n: usize,
    effort: &mut Effort,
) -> Result<Vec<usize>, QuasiError> {
    let mut verts = vertices.to_vec();
    verts.sort_unstable();
    verts.dedup();
    for (&(x, y), &z) in gamma {
        if x >= y || z == x || z == y {
            return Err(QuasiError::Precondition(format!("label {z} on edge ({x}, {y}) is not admissible")));
        }
    }
    match effort.mode {
        Mode::Guaranteed => {
            let need = clique_bound(n as u64)?;
            if BigUint::from(verts.len()) < need || verts.len() > CLIQUE_MAX_VERTICES {
                return Err(QuasiError::Precondition(format!(
                    "{} vertices, need at least f({n}) = {need} and at most {CLIQUE_MAX_VERTICES}",
                    verts.len()
                )));
            }
        }
        Mode::BestEffort => verts.truncate(CLIQUE_MAX_VERTICES),
    }
    let found = extract(&verts, gamma, n, effort)?
        .ok_or_else(|| QuasiError::BestEffortFailure(format!("no label-free clique of order {n}")))?;
    if !is_label_free(&found, gamma) || found.len() != n {
        return Err(QuasiError::Internal("clique extraction produced an invalid set".into()));
    }
    Ok(found)
}

pub fn is_label_free(h: &[usize], gamma: &EdgeLabels) -> bool {
    h.iter().enumerate().all(|(i, &x)| h[i + 1..].iter().all(|&y| label(gamma, x, y).is_none_or(|z| !h.contains(&z))))
}

fn extract(verts: &[usize], gamma: &EdgeLabels, n: usize, effort: &mut Effort) -> Result<Option<Vec<usize>>, QuasiError> {
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if verts.len() < n {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(vec![verts[0]]));
    }
    let pivots = match effort.mode {
        Mode::Guaranteed => 1,
        Mode::BestEffort => verts.len(),
    };
    for &v in &verts[..pivots] {
        effort.spend(1)?;
        let rest: Vec<usize> = verts.iter().copied().filter(|&x| x != v).collect();
        let coloured_v = |x: usize, y: usize| label(gamma, x, y) == Some(v);
        let same = max_clique(&rest, &coloured_v, effort)?;
        if same.len() >= n {
            return Ok(Some(same[..n].to_vec()));
        }
        let mut pool = max_clique(&rest, &|x, y| !coloured_v(x, y), effort)?;
        let mut kept = Vec::new();
        while let Some(&u) = pool.first() {
            kept.push(u);
            let partner = label(gamma, v, u);
            pool.retain(|&x| x != u && Some(x) != partner);
        }
        if let Some(mut h) = extract(&kept, gamma, n - 1, effort)? {
            h.push(v);
            h.sort_unstable();
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// A maximum clique of the graph on `verts` with adjacency `adj` (first found among
/// maximum ones, exploring low indices first).
fn max_clique(verts: &[usize], adj: &dyn Fn(usize, usize) -> bool, effort: &mut Effort) -> Result<Vec<usize>, QuasiError> {
    let k = verts.len();
    let masks: Vec<u32> = (0..k)
        .map(|i| (0..k).filter(|&j| j != i && adj(verts[i], verts[j])).fold(0, |m, j| m | 1 << j))
        .collect();
    let mut best = 0u32;
    grow(&masks, 0, if k == 0 { 0 } else { u32::MAX >> (32 - k) }, &mut best, effort)?;
    Ok((0..k).filter(|&i| best >> i & 1 == 1).map(|i| verts[i]).collect())
}

fn grow(masks: &[u32], cur: u32, cand: u32, best: &mut u32, effort: &mut Effort) -> Result<(), QuasiError> {
    effort.spend(1)?;
    if cur.count_ones() + cand.count_ones() <= best.count_ones() {
        return Ok(());
    }
    if cand == 0 {
        *best = cur;
        return Ok(());
    }
    let v = cand.trailing_zeros() as usize;
    grow(masks, cur | 1 << v, cand & masks[v], best, effort)?;
    grow(masks, cur, cand & !(1 << v), best, effort)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn effort() -> Effort {
        Effort::best_effort(1 << 20)
    }

    #[test]
    fn trivial_targets() {
        let g = EdgeLabels::new();
        assert_eq!(controlled_clique_extract(&[4, 2, 7], &g, 1, &mut effort()).unwrap(), vec![2]);
        assert_eq!(controlled_clique_extract(&[0, 1, 2, 3], &g, 3, &mut effort()).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn adversarial_labels_on_k5() {
        // Each edge points at the next vertex after its larger end, cyclically.
        let mut g = EdgeLabels::new();
        for x in 0..5usize {
            for y in x + 1..5 {
                let z = (1..5).map(|s| (y + s) % 5).find(|&z| z != x).unwrap();
                g.insert((x, y), z);
            }
        }
        let h = controlled_clique_extract(&[0, 1, 2, 3, 4], &g, 2, &mut effort()).unwrap();
        assert!(is_label_free(&h, &g) && h.len() == 2);
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|x| (x + 1..5).map(move |y| (x, y))).collect();
        assert!(pairs.iter().all(|&(x, y)| is_label_free(&[x, y], &g)));
    }

    #[test]
    fn blocked_triangle() {
        // On K_3 every label must be the third vertex, so no label-free triangle exists.
        let mut g = EdgeLabels::new();
        g.insert((0, 1), 2);
        g.insert((0, 2), 1);
        g.insert((1, 2), 0);
        assert!(matches!(
            controlled_clique_extract(&[0, 1, 2], &g, 3, &mut effort()),
            Err(QuasiError::BestEffortFailure(_))
        ));
        let h = controlled_clique_extract(&[0, 1, 2], &g, 2, &mut effort()).unwrap();
        assert_eq!(h, vec![1, 2]);
    }

    #[test]
    fn guaranteed_mode_checks_size() {
        let g = EdgeLabels::new();
        let mut e = Effort::guaranteed(1 << 20);
        assert!(matches!(controlled_clique_extract(&[0, 1], &g, 2, &mut e), Err(QuasiError::Precondition(_))));
        assert_eq!(controlled_clique_extract(&[0, 1, 2], &g, 2, &mut e).unwrap(), vec![0, 1]);
    }

    #[test]
    fn inadmissible_labels() {
        let mut g = EdgeLabels::new();
        g.insert((0, 1), 1);
        assert!(controlled_clique_extract(&[0, 1], &g, 2, &mut effort()).is_err());
    }
}
