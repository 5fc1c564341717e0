//! Single-source and all-pairs shortest paths under the perturbed weights
//! that make every shortest path unique.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::dist::{Dist, PerturbedDist, Rat};
use crate::graph::{Graph, Path};
use crate::par;

/// Result of one single-source run. `dist[t]` is `None` when `t` is
/// unreachable; `parent_edge[t]` is the last edge of the unique minimizing
/// path.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub dist: Vec<Option<PerturbedDist>>,
    pub parent_edge: Vec<Option<usize>>,
}

impl ShortestPaths {
    pub fn base_dist(&self, t: usize) -> Dist {
        match &self.dist[t] {
            Some(pd) => Dist::Finite(pd.base),
            None => Dist::Inf,
        }
    }

    /// Reconstruct the unique path from the run's source to `t`.
    pub fn path_to(&self, g: &Graph, s: usize, t: usize) -> Option<Path> {
        self.dist[t].as_ref()?;
        let mut vertices = vec![t];
        let mut cur = t;
        while cur != s {
            let e = self.parent_edge[cur].expect("reachable vertex without parent");
            cur = g.other_end(e, cur);
            vertices.push(cur);
        }
        vertices.reverse();
        Some(Path {
            vertices,
            length: self.dist[t].as_ref().unwrap().base,
        })
    }
}

fn run_dijkstra(
    g: &Graph,
    s: usize,
    banned: &[usize],
    bound: Option<&Rat>,
) -> ShortestPaths {
    let n = g.n();
    let m = g.m();
    let mut banned_mask = vec![false; m];
    for &e in banned {
        banned_mask[e] = true;
    }

    let mut dist: Vec<Option<PerturbedDist>> = vec![None; n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(PerturbedDist::zero());
    heap.push(Reverse((PerturbedDist::zero(), s)));

    while let Some(Reverse((pd, v))) = heap.pop() {
        if settled[v] {
            continue;
        }
        if let Some(r) = bound {
            if !Dist::Finite(pd.base).le_rat(r) {
                break;
            }
        }
        settled[v] = true;
        for &e in g.out_edges(v) {
            if banned_mask[e] {
                continue;
            }
            let u = g.other_end(e, v);
            if settled[u] {
                continue;
            }
            let cand = pd.extend(g.edge(e).weight, m, e);
            let better = match &dist[u] {
                Some(cur) => cand < *cur,
                None => true,
            };
            if better {
                dist[u] = Some(cand.clone());
                parent_edge[u] = Some(e);
                heap.push(Reverse((cand, u)));
            }
        }
    }
    if bound.is_some() {
        // Entries past the bound were never settled; drop them so the
        // truncated view is exactly "distance <= bound or nothing".
        for v in 0..n {
            if !settled[v] {
                dist[v] = None;
                parent_edge[v] = None;
            }
        }
    }
    ShortestPaths { dist, parent_edge }
}

/// Shortest paths from `s` avoiding the `banned` edge ids. Unreachable
/// vertices hold `None`; there are no error cases.
pub fn sssp(g: &Graph, s: usize, banned: &[usize]) -> ShortestPaths {
    run_dijkstra(g, s, banned, None)
}

/// Like [`sssp`] but only settles vertices within `radius`; everything
/// farther away reports unreachable.
pub fn sssp_bounded(g: &Graph, s: usize, banned: &[usize], radius: &Rat) -> ShortestPaths {
    run_dijkstra(g, s, banned, Some(radius))
}

/// All-pairs data: one [`ShortestPaths`] row per source. The per-row parent
/// structure yields the globally consistent unique paths.
#[derive(Clone, Debug)]
pub struct ApspData {
    rows: Vec<ShortestPaths>,
}

impl ApspData {
    pub fn row(&self, s: usize) -> &ShortestPaths {
        &self.rows[s]
    }

    pub fn dist(&self, s: usize, t: usize) -> Dist {
        self.rows[s].base_dist(t)
    }

    pub fn pdist(&self, s: usize, t: usize) -> Option<&PerturbedDist> {
        self.rows[s].dist[t].as_ref()
    }

    pub fn path(&self, g: &Graph, s: usize, t: usize) -> Option<Path> {
        self.rows[s].path_to(g, s, t)
    }

    /// Whether edge `e` lies on the chosen shortest path from `s` to `t`.
    /// Uses the uniqueness of perturbed distances: `e = (u,v)` is on the
    /// path iff the chosen `s`-`v` path ends with `e` and the perturbed
    /// distances through `v` sum exactly to the `s`-`t` distance.
    pub fn on_chosen_path(&self, g: &Graph, s: usize, t: usize, e: usize) -> bool {
        if s == t {
            return false;
        }
        let v = g.edge(e).head;
        if self.rows[s].parent_edge[v] != Some(e) {
            return false;
        }
        if v == t {
            return true;
        }
        match (self.pdist(s, v), self.pdist(v, t), self.pdist(s, t)) {
            (Some(a), Some(b), Some(c)) => a.checked_add(b) == *c,
            _ => false,
        }
    }
}

/// Run [`sssp`] from every source (in parallel when enabled).
pub fn apsp(g: &Graph) -> ApspData {
    ApspData {
        rows: par::map_range(g.n(), |s| sssp(g, s, &[])),
    }
}
