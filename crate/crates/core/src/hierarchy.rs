//! Hierarchical pivot hitting sets: level `i` holds a vertex set that hits,
//! for every vertex pair and every single failure (edge, or vertex when
//! enabled), some replacement path whose length lies in `(C^i, C^(i+1)]`,
//! and likewise some failure-free shortest path in that window.
//!
//! Levels 0..2 are the full vertex set. Level `i` is assembled from the
//! pivots of the three previous levels: shortest paths between those pivots
//! with length in `(C^(i-6), C^(i+1)]` are collected, every failure on such
//! a shortest path is probed through the exact oracle, replacement paths
//! falling in the same window are added, and a greedy hitting set over the
//! collection becomes the level.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use num::traits::Pow;
use serde::{Deserialize, Serialize};

use crate::dist::{rat_from_str, rat_to_string, Dist, Rat};
use crate::dso::ReferenceDso;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::greedy::greedy_pivot_selection;
use crate::par;
use crate::split::VertexFailureDso;
use crate::sssp::ApspData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotHierarchy {
    pub c: Rat,
    pub levels: Vec<Vec<usize>>,
}

fn rat_pow(c: &Rat, e: i32) -> Rat {
    Pow::pow(c.clone(), e)
}

impl PivotHierarchy {
    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Window `(C^i, C^(i+1)]` covered by level `i`.
    pub fn window(&self, i: usize) -> (Rat, Rat) {
        (rat_pow(&self.c, i as i32), rat_pow(&self.c, i as i32 + 1))
    }

    /// The level whose window contains `d`, if any.
    pub fn level_for_distance(&self, d: u64) -> Option<usize> {
        let d = Dist::Finite(d);
        (0..self.levels.len()).find(|&i| {
            let (lo, hi) = self.window(i);
            d.gt_rat(&lo) && d.le_rat(&hi)
        })
    }

    pub fn to_file(&self) -> HierarchyFile {
        HierarchyFile {
            version: 1,
            c: rat_to_string(&self.c),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(i, pivots)| {
                    let (lo, hi) = self.window(i);
                    HierarchyLevel {
                        i,
                        r_lo: rat_to_string(&lo),
                        r_hi: rat_to_string(&hi),
                        pivots: pivots.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_file(file: &HierarchyFile) -> Result<PivotHierarchy> {
        if file.version != 1 {
            return Err(Error::UnknownVersion(file.version));
        }
        Ok(PivotHierarchy {
            c: rat_from_str(&file.c)?,
            levels: file.levels.iter().map(|l| l.pivots.clone()).collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HierarchyLevel {
    pub i: usize,
    pub r_lo: String,
    pub r_hi: String,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HierarchyFile {
    pub version: u32,
    pub c: String,
    pub levels: Vec<HierarchyLevel>,
}

/// Build the hierarchy for an unweighted digraph. `dso` must answer single
/// edge failures exactly; with `include_vertex_failures` an exact
/// vertex-failure oracle is derived internally via the split transformation
/// and vertices on the probed shortest paths are treated as failures too.
pub fn build_hierarchy(
    g: &Graph,
    data: &ApspData,
    dso: &ReferenceDso<'_>,
    c: &Rat,
    include_vertex_failures: bool,
) -> Result<PivotHierarchy> {
    if *c < Rat::new(3, 2) {
        return Err(Error::InvalidParameter(format!(
            "level ratio must be at least 3/2, got {}",
            rat_to_string(c)
        )));
    }
    if !g.is_unweighted() {
        return Err(Error::WeightedUnsupported);
    }
    let n = g.n().max(1);
    let vdso = if include_vertex_failures {
        Some(VertexFailureDso::new(g)?)
    } else {
        None
    };

    // Smallest i with C^i >= n caps the level count; levels 0..2 always exist.
    let mut top = 0usize;
    while !Rat::from_integer(n as u128).le(&rat_pow(c, top as i32)) {
        top += 1;
    }
    let top = top.max(2);

    let everyone: Vec<usize> = (0..g.n()).collect();
    let mut levels: Vec<Vec<usize>> = vec![everyone.clone(), everyone.clone(), everyone];

    for i in 3..=top {
        let mut union: Vec<usize> = levels[i - 3]
            .iter()
            .chain(&levels[i - 2])
            .chain(&levels[i - 1])
            .copied()
            .collect();
        union.sort_unstable();
        union.dedup();

        let lo = rat_pow(c, i as i32 - 6);
        let hi = rat_pow(c, i as i32 + 1);
        let mut seen = BTreeSet::new();
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut push = |vertices: Vec<usize>, paths: &mut Vec<Vec<usize>>| {
            if seen.insert(vertices.clone()) {
                paths.push(vertices);
            }
        };

        for &x in &union {
            for &y in &union {
                if x == y {
                    continue;
                }
                let d = data.dist(x, y);
                if !d.le_rat(&hi) {
                    continue;
                }
                let p = data.path(g, x, y).expect("finite distance without path");
                if d.gt_rat(&lo) {
                    push(p.vertices.clone(), &mut paths);
                }
                for e in p.edge_ids(g) {
                    let de = dso.distance(x, y, e);
                    if de.gt_rat(&lo) && de.le_rat(&hi) {
                        let rp = dso.path(x, y, e).expect("finite answer without path");
                        push(rp.vertices, &mut paths);
                    }
                }
                if let Some(vdso) = &vdso {
                    for &v in &p.vertices {
                        let dv = vdso.distance(x, y, v);
                        if dv.gt_rat(&lo) && dv.le_rat(&hi) {
                            let rp = vdso.path(x, y, v).expect("finite answer without path");
                            push(rp.vertices, &mut paths);
                        }
                    }
                }
            }
        }

        let l = lo.ceil().to_integer().max(1) as usize;
        levels.push(greedy_pivot_selection(&paths, l)?);
    }

    Ok(PivotHierarchy {
        c: c.clone(),
        levels,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HitViolation {
    pub failure: String,
    pub s: usize,
    pub t: usize,
    pub distance: u64,
    pub level: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub level_sizes: Vec<usize>,
    pub pairs_checked: usize,
    pub violations: Vec<HitViolation>,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independent breadth-first distances, written without the perturbed
/// machinery on purpose: the verifier must not share code with what it
/// checks.
fn bfs_matrix(g: &Graph, banned_edge: Option<usize>, banned_vertex: Option<usize>) -> Vec<Vec<Dist>> {
    let n = g.n();
    let sources: Vec<usize> = (0..n).collect();
    par::map_items(&sources, |s| {
        let mut dist = vec![Dist::Inf; n];
        if Some(s) == banned_vertex {
            return dist;
        }
        let mut queue = VecDeque::new();
        dist[s] = Dist::Finite(0);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].finite().unwrap();
            for &e in g.out_edges(v) {
                if Some(e) == banned_edge {
                    continue;
                }
                let u = g.edge(e).head;
                if Some(u) == banned_vertex || dist[u].is_finite() {
                    continue;
                }
                dist[u] = Dist::Finite(dv + 1);
                queue.push_back(u);
            }
        }
        dist
    })
}

fn sweep_failure(
    g: &Graph,
    h: &PivotHierarchy,
    label: &str,
    matrix: &[Vec<Dist>],
    skip: Option<usize>,
    report: &mut HierarchyReport,
) {
    for s in 0..g.n() {
        if Some(s) == skip {
            continue;
        }
        for t in 0..g.n() {
            if t == s || Some(t) == skip {
                continue;
            }
            let d = match matrix[s][t] {
                Dist::Finite(d) => d,
                Dist::Inf => continue,
            };
            let level = match h.level_for_distance(d) {
                Some(i) => i,
                None => continue,
            };
            report.pairs_checked += 1;
            let hit = h.levels[level].iter().any(|&z| {
                Some(z) != skip && matrix[s][z] + matrix[z][t] == Dist::Finite(d)
            });
            if !hit {
                report.violations.push(HitViolation {
                    failure: label.to_string(),
                    s,
                    t,
                    distance: d,
                    level,
                });
            }
        }
    }
}

/// Brute-force check of the hitting guarantee: for every pair and every
/// single failure, a replacement distance falling in a level's window must
/// decompose exactly through one of that level's pivots; likewise without
/// failures. Requires an unweighted graph.
pub fn verify_hierarchy(
    g: &Graph,
    h: &PivotHierarchy,
    include_vertex_failures: bool,
) -> Result<HierarchyReport> {
    if !g.is_unweighted() {
        return Err(Error::WeightedUnsupported);
    }
    let mut report = HierarchyReport {
        level_sizes: h.levels.iter().map(|l| l.len()).collect(),
        pairs_checked: 0,
        violations: Vec::new(),
    };
    let free = bfs_matrix(g, None, None);
    sweep_failure(g, h, "none", &free, None, &mut report);
    for e in 0..g.m() {
        let matrix = bfs_matrix(g, Some(e), None);
        sweep_failure(g, h, &format!("edge {e}"), &matrix, None, &mut report);
    }
    if include_vertex_failures {
        for v in 0..g.n() {
            let matrix = bfs_matrix(g, None, Some(v));
            sweep_failure(g, h, &format!("vertex {v}"), &matrix, Some(v), &mut report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dso::ReferenceDso;
    use crate::gen;
    use crate::sssp::apsp;
    use std::sync::Arc;

    fn build(g: &Graph, with_vertices: bool) -> PivotHierarchy {
        let data = Arc::new(apsp(g));
        let dso = ReferenceDso::new(g, data.clone());
        build_hierarchy(g, &data, &dso, &Rat::from_integer(2), with_vertices).unwrap()
    }

    #[test]
    fn tiny_graph_keeps_three_full_levels() {
        let g = gen::fixtures::cycle(4);
        let h = build(&g, false);
        assert_eq!(h.levels.len(), 3);
        for level in &h.levels {
            assert_eq!(level, &vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn ratio_below_three_halves_is_rejected() {
        let g = gen::fixtures::cycle(4);
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        assert!(build_hierarchy(&g, &data, &dso, &Rat::new(4, 3), false).is_err());
    }

    #[test]
    fn weighted_graphs_are_rejected() {
        let g = gen::fixtures::triangle();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        assert!(matches!(
            build_hierarchy(&g, &data, &dso, &Rat::from_integer(2), false),
            Err(Error::WeightedUnsupported)
        ));
    }

    #[test]
    fn hitting_identity_holds_with_vertex_failures() {
        let g = gen::random_strongly_connected(18, 60, 1, 8).unwrap();
        let h = build(&g, true);
        let report = verify_hierarchy(&g, &h, true).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn sabotaged_level_is_detected() {
        let g = gen::random_strongly_connected(18, 60, 1, 8).unwrap();
        let mut h = build(&g, false);
        // Pick a level whose window actually contains distances and empty it.
        let free = bfs_matrix(&g, None, None);
        let mut target = None;
        'outer: for s in 0..g.n() {
            for t in 0..g.n() {
                if let Dist::Finite(d) = free[s][t] {
                    if let Some(i) = h.level_for_distance(d) {
                        if i >= 3 {
                            target = Some(i);
                            break 'outer;
                        }
                    }
                }
            }
        }
        if let Some(i) = target {
            h.levels[i].clear();
            let report = verify_hierarchy(&g, &h, false).unwrap();
            assert!(!report.passed());
        }
    }

    #[test]
    fn full_vertex_levels_never_violate() {
        let g = gen::random_strongly_connected(15, 50, 1, 77).unwrap();
        let everyone: Vec<usize> = (0..g.n()).collect();
        let h = PivotHierarchy {
            c: Rat::from_integer(2),
            levels: vec![everyone; 6],
        };
        let report = verify_hierarchy(&g, &h, true).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn builds_are_deterministic() {
        let g = gen::random_strongly_connected(20, 70, 1, 3).unwrap();
        let a = build(&g, true);
        let b = build(&g, true);
        assert_eq!(
            serde_json::to_string(&a.to_file()).unwrap(),
            serde_json::to_string(&b.to_file()).unwrap()
        );
    }

    #[test]
    fn file_round_trip() {
        let g = gen::random_strongly_connected(12, 40, 1, 5).unwrap();
        let h = build(&g, false);
        let json = serde_json::to_string(&h.to_file()).unwrap();
        let file: HierarchyFile = serde_json::from_str(&json).unwrap();
        let back = PivotHierarchy::from_file(&file).unwrap();
        assert_eq!(h, back);
    }
}
