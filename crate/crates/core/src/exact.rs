//! Brute-force recomputation: replacement paths, eccentricities, diameters,
//! strong bridges. These are the ground truth every oracle is checked
//! against; clarity and exactness over speed.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::par;
use crate::sssp::sssp;

/// The unique shortest `s`-`t` path avoiding the edges in `banned`, or
/// `None` when `t` is unreachable.
pub fn replacement_path(g: &Graph, s: usize, t: usize, banned: &[usize]) -> Option<Path> {
    sssp(g, s, banned).path_to(g, s, t)
}

pub fn replacement_distance(g: &Graph, s: usize, t: usize, banned: &[usize]) -> Dist {
    sssp(g, s, banned).base_dist(t)
}

/// Max distance from `s` to any other vertex in `g - banned`; infinite as
/// soon as one vertex is unreachable.
pub fn eccentricity(g: &Graph, s: usize, banned: &[usize]) -> Dist {
    let run = sssp(g, s, banned);
    let mut worst = Dist::Finite(0);
    for t in 0..g.n() {
        worst = worst.max(run.base_dist(t));
    }
    worst
}

/// Max eccentricity over all sources.
pub fn diameter(g: &Graph, banned: &[usize]) -> Dist {
    par::map_range(g.n(), |s| eccentricity(g, s, banned))
        .into_iter()
        .max()
        .unwrap_or(Dist::Finite(0))
}

/// Diameter of the graph with vertex `v` (and its incident edges) removed.
pub fn diameter_without_vertex(g: &Graph, v: usize) -> Dist {
    let banned = incident_edges(g, v);
    let sources: Vec<usize> = (0..g.n()).filter(|&s| s != v).collect();
    par::map_items(&sources, |s| {
        let run = sssp(g, s, &banned);
        let mut worst = Dist::Finite(0);
        for t in 0..g.n() {
            if t != v {
                worst = worst.max(run.base_dist(t));
            }
        }
        worst
    })
    .into_iter()
    .max()
    .unwrap_or(Dist::Finite(0))
}

pub fn incident_edges(g: &Graph, v: usize) -> Vec<usize> {
    let mut ids: Vec<usize> = g.out_edges(v).iter().chain(g.in_edges(v)).copied().collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Number of vertices reachable from `start` in `g - banned - excluded`
/// (following out-edges, or in-edges with `reverse`).
fn sweep(g: &Graph, start: usize, banned: &[usize], excluded: Option<usize>, reverse: bool) -> usize {
    let mut banned_mask = vec![false; g.m()];
    for &e in banned {
        banned_mask[e] = true;
    }
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        let adj = if reverse { g.in_edges(v) } else { g.out_edges(v) };
        for &e in adj {
            if banned_mask[e] {
                continue;
            }
            let u = g.other_end(e, v);
            if Some(u) == excluded || seen[u] {
                continue;
            }
            seen[u] = true;
            count += 1;
            stack.push(u);
        }
    }
    count
}

pub fn reachable_count(g: &Graph, start: usize, banned: &[usize], excluded: Option<usize>) -> usize {
    sweep(g, start, banned, excluded, false)
}

/// Strong connectivity of `g - banned - excluded` via a forward and a
/// backward sweep from one pivot vertex.
pub fn strongly_connected(g: &Graph, banned: &[usize], excluded: Option<usize>) -> bool {
    let live = g.n() - usize::from(excluded.is_some());
    if live == 0 {
        return true;
    }
    let start = (0..g.n()).find(|&v| Some(v) != excluded).unwrap();
    sweep(g, start, banned, excluded, false) == live
        && sweep(g, start, banned, excluded, true) == live
}

/// All edges whose removal breaks strong connectivity, by per-edge removal
/// and a fresh connectivity sweep. Errors when `g` itself is not strongly
/// connected.
pub fn strong_bridges(g: &Graph) -> Result<Vec<usize>> {
    if !strongly_connected(g, &[], None) {
        return Err(Error::NotStronglyConnected);
    }
    let ids: Vec<usize> = (0..g.m()).collect();
    let keep = par::map_items(&ids, |e| !strongly_connected(g, &[e], None));
    Ok(ids.into_iter().filter(|&e| keep[e]).collect())
}

/// All vertices whose removal breaks strong connectivity of the rest.
pub fn strong_articulation_points(g: &Graph) -> Result<Vec<usize>> {
    if !strongly_connected(g, &[], None) {
        return Err(Error::NotStronglyConnected);
    }
    let ids: Vec<usize> = (0..g.n()).collect();
    let cut = par::map_items(&ids, |v| {
        !strongly_connected(g, &incident_edges(g, v), Some(v))
    });
    Ok(ids.into_iter().filter(|&v| cut[v]).collect())
}
