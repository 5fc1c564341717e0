//! Hitting-set subroutines for single-source replacement paths on
//! unweighted digraphs: a balanced tree separator, enumeration of the pairs
//! a level-`k` pivot set must serve, the small-`k` construction via
//! suffix-peeled epsilon-weighted searches, the inductive large-`k`
//! construction, and a brute-force verifier.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::greedy::greedy_pivot_selection;

/// Distance in the graph where tree-path edges weigh an infinitesimal and
/// everything else weighs one. Paths have fewer than `n` edges and the
/// infinitesimal is below `1/n`, so comparing `(unit, eps)`
/// lexicographically is exactly comparing `unit + eps * epsilon`
/// numerically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct EpsDist {
    pub unit: u32,
    pub eps: u32,
}

impl EpsDist {
    pub const ZERO: EpsDist = EpsDist { unit: 0, eps: 0 };

    fn step(self, on_path: bool) -> EpsDist {
        if on_path {
            EpsDist {
                unit: self.unit,
                eps: self.eps + 1,
            }
        } else {
            EpsDist {
                unit: self.unit + 1,
                eps: self.eps,
            }
        }
    }
}

/// Source tree, balanced separator, and the banned path-edge set shared by
/// all the constructions.
pub struct SsrpContext<'g> {
    pub g: &'g Graph,
    pub source: usize,
    /// Vertices of the separator path from the source to the separator, in
    /// order.
    pub path: Vec<usize>,
    /// Tree edges along that path; removing them gives the working graph.
    pub path_edges: Vec<usize>,
    /// Side of the split containing the source (plus the separator).
    pub near_side: Vec<usize>,
    /// Side of the split rooted at the separator (plus the separator).
    pub far_side: Vec<usize>,
    pub separator: usize,
}

/// Deterministic BFS distances in `g` minus `banned` edges and minus the
/// `removed` vertices.
fn bfs_dist(g: &Graph, start: usize, banned: &[bool], removed: &[bool]) -> Vec<Dist> {
    let mut dist = vec![Dist::Inf; g.n()];
    if removed[start] {
        return dist;
    }
    dist[start] = Dist::Finite(0);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].finite().unwrap();
        for &e in g.out_edges(v) {
            if banned[e] {
                continue;
            }
            let u = g.edge(e).head;
            if removed[u] || dist[u].is_finite() {
                continue;
            }
            dist[u] = Dist::Finite(dv + 1);
            queue.push_back(u);
        }
    }
    dist
}

fn edge_mask(g: &Graph, edges: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; g.m()];
    for &e in edges {
        mask[e] = true;
    }
    mask
}

/// BFS in the working graph with smallest-id parents, returning distances
/// and the parent vector for path reconstruction.
fn bfs_tree(g: &Graph, start: usize, banned: &[bool]) -> (Vec<Dist>, Vec<Option<usize>>) {
    let dist = bfs_dist(g, start, banned, &vec![false; g.n()]);
    let mut parent = vec![None; g.n()];
    for v in 0..g.n() {
        if v == start || !dist[v].is_finite() {
            continue;
        }
        let want = dist[v];
        let mut best: Option<usize> = None;
        for &e in g.in_edges(v) {
            if banned[e] {
                continue;
            }
            let u = g.edge(e).tail;
            if dist[u] + Dist::Finite(1) == want && best.map_or(true, |b| u < b) {
                best = Some(u);
            }
        }
        parent[v] = best;
    }
    (dist, parent)
}

pub fn make_context(g: &Graph, source: usize) -> Result<SsrpContext<'_>> {
    if !g.is_unweighted() {
        return Err(Error::WeightedUnsupported);
    }
    if source >= g.n() {
        return Err(Error::InvalidVertex(source));
    }
    let n = g.n();
    let no_ban = vec![false; g.m()];
    let (dist, parent) = bfs_tree(g, source, &no_ban);
    if let Some(v) = (0..n).find(|&v| !dist[v].is_finite()) {
        return Err(Error::UnreachableFromSource(v));
    }

    // Children lists and subtree sizes of the source tree.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = parent[v] {
            children[p].push(v);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| Reverse(dist[v]));
    let mut size = vec![1usize; n];
    for &v in &order {
        if let Some(p) = parent[v] {
            size[p] += size[v];
        }
    }

    // Walk towards the heavy side until every component at the separator
    // has at most n/2 vertices.
    let mut sep = source;
    loop {
        let heavy = children[sep]
            .iter()
            .copied()
            .filter(|&c| 2 * size[c] > n)
            .min();
        match heavy {
            Some(c) => sep = c,
            None => break,
        }
    }

    // Split the separator's child subtrees into a far group whose size
    // (plus the separator) lands as close to (n+1)/2 as possible; exact
    // subset-sum over at most n component sizes.
    let comps: Vec<usize> = children[sep].iter().copied().collect();
    let sums = comps.len() + 1;
    let mut reachable = vec![vec![false; n + 1]; sums];
    reachable[0][0] = true;
    for (idx, &c) in comps.iter().enumerate() {
        for s in 0..=n {
            reachable[idx + 1][s] = reachable[idx][s]
                || (s >= size[c] && reachable[idx][s - size[c]]);
        }
    }
    let target = (n + 1) / 2;
    let best_sum = (0..=n)
        .filter(|&s| reachable[comps.len()][s])
        .min_by_key(|&s| ((s + 1).abs_diff(target), s))
        .unwrap();
    let mut chosen = vec![false; comps.len()];
    let mut s = best_sum;
    for idx in (0..comps.len()).rev() {
        if !reachable[idx][s] {
            chosen[idx] = true;
            s -= size[comps[idx]];
        }
    }

    let mut in_far = vec![false; n];
    in_far[sep] = true;
    let mut stack: Vec<usize> = comps
        .iter()
        .zip(&chosen)
        .filter(|(_, &c)| c)
        .map(|(&v, _)| v)
        .collect();
    while let Some(v) = stack.pop() {
        in_far[v] = true;
        stack.extend(children[v].iter().copied());
    }
    let far_side: Vec<usize> = (0..n).filter(|&v| in_far[v]).collect();
    let near_side: Vec<usize> = (0..n).filter(|&v| !in_far[v] || v == sep).collect();

    // Tree path from the source to the separator.
    let mut path = vec![sep];
    let mut cur = sep;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    let path_edges: Vec<usize> = path
        .windows(2)
        .map(|w| g.edge_between(w[0], w[1]).expect("tree path uses an edge"))
        .collect();

    Ok(SsrpContext {
        g,
        source,
        path,
        path_edges,
        near_side,
        far_side,
        separator: sep,
    })
}

impl SsrpContext<'_> {
    /// Both sides within a 1/3 .. 2/3 fraction of the vertex count.
    pub fn separator_balanced(&self) -> bool {
        let n = self.g.n();
        let ok = |s: usize| 3 * s >= n && 3 * s <= 2 * n;
        ok(self.near_side.len()) && ok(self.far_side.len())
    }

    /// BFS distances from `start` in the graph minus the separator-path
    /// edges.
    pub fn dist_in_working_graph(&self, start: usize) -> Vec<Dist> {
        let banned = edge_mask(self.g, &self.path_edges);
        bfs_dist(self.g, start, &banned, &vec![false; self.g.n()])
    }
}

/// Pairs `(u on the path, v on the far side)` whose working-graph distance
/// exceeds `2^(k+1)` while every earlier path vertex is strictly farther
/// from `v`. Only finite distances count; an unreachable pair has no path a
/// pivot could hit.
pub fn k_relevant_pairs(ctx: &SsrpContext<'_>, k: u32) -> Vec<(usize, usize)> {
    let threshold = 1u64 << (k + 1);
    let rows: Vec<Vec<Dist>> = ctx
        .path
        .iter()
        .map(|&u| ctx.dist_in_working_graph(u))
        .collect();
    let mut pairs = Vec::new();
    for &v in &ctx.far_side {
        let mut running_min = Dist::Inf;
        for (ui, _) in ctx.path.iter().enumerate() {
            let d = rows[ui][v];
            if let Dist::Finite(dv) = d {
                if dv > threshold && d < running_min {
                    pairs.push((ui, v));
                }
            }
            running_min = running_min.min(d);
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Epsilon-weighted Dijkstra from the source in the graph with a suffix of
/// the separator path removed, pruned at `unit > bound`. Returns distances
/// and smallest-id parents.
fn eps_dijkstra(
    ctx: &SsrpContext<'_>,
    removed: &[bool],
    on_path: &[bool],
    bound: u32,
) -> (Vec<Option<EpsDist>>, Vec<Option<usize>>) {
    let g = ctx.g;
    let mut dist: Vec<Option<EpsDist>> = vec![None; g.n()];
    let mut settled = vec![false; g.n()];
    let mut heap: BinaryHeap<Reverse<(EpsDist, usize)>> = BinaryHeap::new();
    dist[ctx.source] = Some(EpsDist::ZERO);
    heap.push(Reverse((EpsDist::ZERO, ctx.source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v] {
            continue;
        }
        if d.unit > bound {
            break;
        }
        settled[v] = true;
        for &e in g.out_edges(v) {
            let u = g.edge(e).head;
            if removed[u] || settled[u] {
                continue;
            }
            let cand = d.step(on_path[e]);
            if dist[u].map_or(true, |cur| cand < cur) {
                dist[u] = Some(cand);
                heap.push(Reverse((cand, u)));
            }
        }
    }
    for v in 0..g.n() {
        if !settled[v] {
            dist[v] = None;
        }
    }
    let mut parent = vec![None; g.n()];
    for v in 0..g.n() {
        if v == ctx.source || removed[v] {
            continue;
        }
        let dv = match dist[v] {
            Some(d) => d,
            None => continue,
        };
        let mut best: Option<usize> = None;
        for &e in g.in_edges(v) {
            let u = g.edge(e).tail;
            if removed[u] {
                continue;
            }
            if let Some(du) = dist[u] {
                if du.step(on_path[e]) == dv && best.map_or(true, |b| u < b) {
                    best = Some(u);
                }
            }
        }
        parent[v] = best;
    }
    (dist, parent)
}

/// Level sets `B_0 ..= B_k_max` for the small levels: peel the separator
/// path from the back, collect, per surviving graph, the vertices whose
/// epsilon-weighted distance from the source lies in `[2^k, 2^k + 1]`, keep
/// the last `2^k` edges of each such shortest path, and hit those suffixes
/// greedily.
pub fn compute_b0(ctx: &SsrpContext<'_>, k_max: u32) -> Result<Vec<Vec<usize>>> {
    let g = ctx.g;
    let on_path = edge_mask(g, &ctx.path_edges);
    let mut levels = Vec::new();
    for k in 0..=k_max {
        let window = 1u32 << k;
        let lo = EpsDist { unit: window, eps: 0 };
        let hi = EpsDist { unit: window + 1, eps: 0 };
        let mut seen = BTreeSet::new();
        let mut collected: Vec<Vec<usize>> = Vec::new();
        for i in (0..ctx.path.len()).rev() {
            let mut removed = vec![false; g.n()];
            for &v in &ctx.path[i + 1..] {
                removed[v] = true;
            }
            let (dist, parent) = eps_dijkstra(ctx, &removed, &on_path, window + 1);
            for v in 0..g.n() {
                let d = match dist[v] {
                    Some(d) => d,
                    None => continue,
                };
                if d < lo || d > hi {
                    continue;
                }
                let mut vertices = vec![v];
                let mut cur = v;
                while let Some(p) = parent[cur] {
                    vertices.push(p);
                    cur = p;
                }
                vertices.reverse();
                debug_assert!(vertices.len() > window as usize);
                let suffix = vertices[vertices.len() - window as usize - 1..].to_vec();
                if seen.insert(suffix.clone()) {
                    collected.push(suffix);
                }
            }
        }
        levels.push(greedy_pivot_selection(&collected, window as usize)?);
    }
    Ok(levels)
}

/// Inductive step for large levels: breadth-first trees from the previous
/// pivots in the working graph; every vertex at depth exactly `2^k`
/// contributes its tree path, and the greedy hitting set over those paths
/// is the next level.
pub fn compute_bk(ctx: &SsrpContext<'_>, prev: &[usize], k: u32) -> Result<Vec<usize>> {
    let g = ctx.g;
    let banned = edge_mask(g, &ctx.path_edges);
    let depth = 1u64 << k;
    let mut seen = BTreeSet::new();
    let mut collected: Vec<Vec<usize>> = Vec::new();
    for &u in prev {
        let (dist, parent) = bfs_tree(g, u, &banned);
        for v in 0..g.n() {
            if dist[v] != Dist::Finite(depth) {
                continue;
            }
            let mut vertices = vec![v];
            let mut cur = v;
            while let Some(p) = parent[cur] {
                vertices.push(p);
                cur = p;
            }
            vertices.reverse();
            debug_assert_eq!(vertices.len() as u64, depth + 1);
            if seen.insert(vertices.clone()) {
                collected.push(vertices);
            }
        }
    }
    greedy_pivot_selection(&collected, depth as usize)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsrpViolation {
    pub k: u32,
    pub u: usize,
    pub v: usize,
    pub distance: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsrpLevelReport {
    pub k: u32,
    pub pivots: usize,
    pub relevant_pairs: usize,
    pub violations: Vec<SsrpViolation>,
}

impl SsrpLevelReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that every relevant pair decomposes exactly through some pivot
/// within `2^(k+1)` of the path vertex.
pub fn verify_ssrp_hitting(ctx: &SsrpContext<'_>, b_k: &[usize], k: u32) -> SsrpLevelReport {
    let pairs = k_relevant_pairs(ctx, k);
    let rows_u: Vec<Vec<Dist>> = ctx
        .path
        .iter()
        .map(|&u| ctx.dist_in_working_graph(u))
        .collect();
    let rows_b: Vec<Vec<Dist>> = b_k
        .iter()
        .map(|&b| ctx.dist_in_working_graph(b))
        .collect();
    let reach = 1u64 << (k + 1);
    let mut violations = Vec::new();
    for &(ui, v) in &pairs {
        let d = rows_u[ui][v];
        let hit = b_k.iter().enumerate().any(|(bi, _)| {
            let to_b = rows_u[ui][b_k[bi]];
            matches!(to_b, Dist::Finite(x) if x <= reach) && to_b + rows_b[bi][v] == d
        });
        if !hit {
            violations.push(SsrpViolation {
                k,
                u: ctx.path[ui],
                v,
                distance: d.finite().unwrap(),
            });
        }
    }
    SsrpLevelReport {
        k,
        pivots: b_k.len(),
        relevant_pairs: pairs.len(),
        violations,
    }
}

/// Full pipeline: small levels from the peeled construction up to
/// `floor(log2(n) / 2)`, then the inductive step up to `floor(log2 n)`.
pub fn hitting_chain(ctx: &SsrpContext<'_>) -> Result<Vec<Vec<usize>>> {
    let n = ctx.g.n().max(2);
    let top = (n as f64).log2().floor() as u32;
    let small_top = ((n as f64).log2() / 2.0).floor() as u32;
    let mut levels = compute_b0(ctx, small_top)?;
    for k in small_top + 1..=top {
        let next = compute_bk(ctx, &levels[k as usize - 1], k)?;
        levels.push(next);
    }
    Ok(levels)
}
