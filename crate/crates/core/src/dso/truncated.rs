//! Radius-truncated oracles and the pivot-based extension that grows the
//! radius by a factor 3/2 per round until every distance is covered.

use std::collections::BTreeSet;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::dist::{rat_to_string, Dist, Rat};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::greedy::greedy_pivot_selection;
use crate::sssp::{apsp, sssp_bounded, ApspData, ShortestPaths};

/// An `r`-truncated oracle: a finite answer is the exact replacement
/// distance and is at most `r`; anything larger reports infinity.
pub enum TruncatedDso<'g> {
    Core {
        g: &'g Graph,
        data: Arc<ApspData>,
        radius: Rat,
        cache: DashMap<(usize, usize), Arc<ShortestPaths>>,
    },
    Extended {
        inner: Box<TruncatedDso<'g>>,
        pivots: Vec<usize>,
        radius: Rat,
        /// Memoized answers; without it a stack of extensions would pay the
        /// product of all pivot-set sizes per query instead of the sum.
        memo: DashMap<(usize, usize, usize), Dist>,
    },
}

impl<'g> TruncatedDso<'g> {
    pub fn radius(&self) -> &Rat {
        match self {
            TruncatedDso::Core { radius, .. } => radius,
            TruncatedDso::Extended { radius, .. } => radius,
        }
    }

    pub fn graph(&self) -> &Graph {
        match self {
            TruncatedDso::Core { g, .. } => g,
            TruncatedDso::Extended { inner, .. } => inner.graph(),
        }
    }

    pub fn distance(&self, s: usize, t: usize, e: usize) -> Dist {
        match self {
            TruncatedDso::Core {
                g,
                data,
                radius,
                cache,
            } => {
                if s == t {
                    return Dist::Finite(0);
                }
                let d = if data.on_chosen_path(g, s, t, e) {
                    cache
                        .entry((s, e))
                        .or_insert_with(|| Arc::new(sssp_bounded(g, s, &[e], radius)))
                        .base_dist(t)
                } else {
                    data.dist(s, t)
                };
                if d.le_rat(radius) {
                    d
                } else {
                    Dist::Inf
                }
            }
            TruncatedDso::Extended {
                inner,
                pivots,
                radius,
                memo,
            } => {
                if let Some(hit) = memo.get(&(s, t, e)) {
                    return *hit;
                }
                let direct = inner.distance(s, t, e);
                let answer = if direct.is_finite() {
                    direct
                } else {
                    let mut best = Dist::Inf;
                    for &z in pivots {
                        best = best.min(inner.distance(s, z, e) + inner.distance(z, t, e));
                    }
                    if best.le_rat(radius) {
                        best
                    } else {
                        Dist::Inf
                    }
                };
                memo.insert((s, t, e), answer);
                answer
            }
        }
    }

    pub fn path(&self, s: usize, t: usize, e: usize) -> Option<Path> {
        match self {
            TruncatedDso::Core {
                g,
                data,
                radius,
                cache,
            } => {
                if s == t {
                    return Some(Path {
                        vertices: vec![s],
                        length: 0,
                    });
                }
                let (d, p) = if data.on_chosen_path(g, s, t, e) {
                    let row = cache
                        .entry((s, e))
                        .or_insert_with(|| Arc::new(sssp_bounded(g, s, &[e], radius)))
                        .clone();
                    (row.base_dist(t), row.path_to(g, s, t))
                } else {
                    (data.dist(s, t), data.path(g, s, t))
                };
                if d.le_rat(radius) {
                    p
                } else {
                    None
                }
            }
            TruncatedDso::Extended {
                inner,
                pivots,
                radius,
                memo: _,
            } => {
                if let Some(p) = inner.path(s, t, e) {
                    return Some(p);
                }
                let mut best = Dist::Inf;
                let mut best_pivot = None;
                for &z in pivots {
                    let cand = inner.distance(s, z, e) + inner.distance(z, t, e);
                    if cand < best {
                        best = cand;
                        best_pivot = Some(z);
                    }
                }
                let z = best_pivot?;
                if !best.le_rat(radius) {
                    return None;
                }
                let first = inner.path(s, z, e)?;
                let second = inner.path(z, t, e)?;
                let mut vertices = first.vertices;
                vertices.extend_from_slice(&second.vertices[1..]);
                Some(Path {
                    vertices,
                    length: first.length + second.length,
                })
            }
        }
    }
}

/// Brute-force `r`-truncated oracle: off-path failures reuse the all-pairs
/// answer, on-path failures run a radius-bounded search cached per
/// `(source, edge)`.
pub fn build_truncated_core<'g>(g: &'g Graph, data: Arc<ApspData>, radius: Rat) -> TruncatedDso<'g> {
    TruncatedDso::Core {
        g,
        data,
        radius,
        cache: DashMap::new(),
    }
}

/// Wrap an `r`-truncated oracle with a pivot set hitting the window
/// `[r/2 - M, r]` to obtain a `(3/2) r`-truncated oracle.
pub fn extend_dso(dso: TruncatedDso<'_>, pivots: Vec<usize>) -> TruncatedDso<'_> {
    let radius = dso.radius() * Rat::new(3, 2);
    TruncatedDso::Extended {
        inner: Box::new(dso),
        pivots,
        radius,
        memo: DashMap::new(),
    }
}

/// Assemble the candidate paths for the next pivot level: shortest paths
/// between previous-level pivots with length in `[r/18, r]`, plus, for
/// every edge on any previous-pivot shortest path of length at most `r`,
/// the replacement path whenever its length falls in the same window.
pub fn collect_extension_paths(
    g: &Graph,
    data: &ApspData,
    prev: &[usize],
    dso: &TruncatedDso<'_>,
    r: &Rat,
) -> Result<Vec<Path>> {
    if dso.radius() < r {
        return Err(Error::RadiusTooSmall {
            radius: rat_to_string(dso.radius()),
            needed: rat_to_string(r),
        });
    }
    let lo = r / Rat::from_integer(18);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |p: Path, out: &mut Vec<Path>| {
        if seen.insert(p.vertices.clone()) {
            out.push(p);
        }
    };
    for &x in prev {
        for &y in prev {
            if x == y {
                continue;
            }
            let d = data.dist(x, y);
            if !d.le_rat(r) {
                continue;
            }
            let p = data.path(g, x, y).expect("finite distance without path");
            let edge_ids = p.edge_ids(g);
            if d.ge_rat(&lo) {
                push(p, &mut out);
            }
            for e in edge_ids {
                let de = dso.distance(x, y, e);
                if de.is_finite() && de.ge_rat(&lo) && de.le_rat(r) {
                    let rp = dso
                        .path(x, y, e)
                        .expect("finite truncated answer without path");
                    push(rp, &mut out);
                }
            }
        }
    }
    Ok(out)
}

/// Next pivot level from the previous one: greedy hitting set over the
/// collected paths, each guaranteed to carry at least `ceil(r / 18M)`
/// vertices.
pub fn extend_pivots(
    g: &Graph,
    data: &ApspData,
    prev: &[usize],
    dso: &TruncatedDso<'_>,
    r: &Rat,
    max_weight: u64,
) -> Result<(Vec<usize>, usize)> {
    let paths = collect_extension_paths(g, data, prev, dso, r)?;
    let l = (r / Rat::from_integer(18 * max_weight as u128))
        .ceil()
        .to_integer()
        .max(1) as usize;
    let sets: Vec<Vec<usize>> = paths.into_iter().map(|p| p.vertices).collect();
    let pivots = greedy_pivot_selection(&sets, l)?;
    Ok((pivots, sets.len()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelStats {
    pub radius: String,
    pub candidate_paths: usize,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct FullDsoStats {
    pub levels: Vec<LevelStats>,
}

/// Exact oracle built by growing a truncated core until its radius covers
/// every finite distance.
pub struct FullDso<'g> {
    dso: TruncatedDso<'g>,
    data: Arc<ApspData>,
}

impl<'g> FullDso<'g> {
    pub fn distance(&self, s: usize, t: usize, e: usize) -> Dist {
        self.dso.distance(s, t, e)
    }

    pub fn path(&self, s: usize, t: usize, e: usize) -> Option<Path> {
        self.dso.path(s, t, e)
    }

    pub fn apsp(&self) -> &ApspData {
        &self.data
    }

    pub fn radius(&self) -> &Rat {
        self.dso.radius()
    }
}

/// Driver: start from a brute-force core of radius `r1`, then repeatedly
/// select pivots from two levels back and extend, until the radius reaches
/// `n * max_weight`. Records radius, candidate-path count, and the pivot set
/// per level.
pub fn build_full_dso(g: &Graph, r1: Rat) -> Result<(FullDso<'_>, FullDsoStats)> {
    if r1 < Rat::from_integer(1) {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let data = Arc::new(apsp(g));
    let target = Rat::from_integer((g.n() as u128) * g.max_weight() as u128);
    let everyone: Vec<usize> = (0..g.n()).collect();

    let mut dso = build_truncated_core(g, data.clone(), r1);
    let mut stats = FullDsoStats::default();
    let mut two_back = everyone.clone();
    let mut one_back = everyone;
    while *dso.radius() < target {
        let r = dso.radius().clone();
        let (pivots, candidate_paths) =
            extend_pivots(g, &data, &two_back, &dso, &r, g.max_weight())?;
        stats.levels.push(LevelStats {
            radius: rat_to_string(&r),
            candidate_paths,
            pivots: pivots.clone(),
        });
        dso = extend_dso(dso, pivots.clone());
        two_back = std::mem::replace(&mut one_back, pivots);
    }
    Ok((FullDso { dso, data }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::gen::{self, fixtures};

    fn core(g: &Graph, r: u128) -> TruncatedDso<'_> {
        build_truncated_core(g, Arc::new(apsp(g)), Rat::from_integer(r))
    }

    #[test]
    fn truncation_clamps_to_infinity() {
        let g = fixtures::triangle();
        let e = g.edge_between(fixtures::TRI_A, fixtures::TRI_T).unwrap();
        let dso = core(&g, 2);
        assert_eq!(dso.distance(fixtures::TRI_S, fixtures::TRI_T, e), Dist::Inf);
        assert!(dso.path(fixtures::TRI_S, fixtures::TRI_T, e).is_none());
        let dso = core(&g, 3);
        assert_eq!(
            dso.distance(fixtures::TRI_S, fixtures::TRI_T, e),
            Dist::Finite(3)
        );
    }

    #[test]
    fn generous_radius_equals_reference() {
        let g = gen::random_strongly_connected(10, 30, 2, 17).unwrap();
        let radius = (g.n() as u128) * g.max_weight() as u128;
        let dso = core(&g, radius);
        for s in 0..g.n() {
            for t in 0..g.n() {
                for e in 0..g.m() {
                    assert_eq!(
                        dso.distance(s, t, e),
                        exact::replacement_distance(&g, s, t, &[e])
                    );
                }
            }
        }
    }

    #[test]
    fn truncated_answers_are_sound() {
        // Never a wrong finite value, never a finite value above the radius.
        let g = gen::random_digraph(12, 40, 3, 5).unwrap();
        let r = Rat::from_integer(7);
        let dso = build_truncated_core(&g, Arc::new(apsp(&g)), r.clone());
        for s in 0..g.n() {
            for t in 0..g.n() {
                for e in 0..g.m() {
                    let got = dso.distance(s, t, e);
                    if let Dist::Finite(v) = got {
                        assert!(Dist::Finite(v).le_rat(&r));
                        assert_eq!(got, exact::replacement_distance(&g, s, t, &[e]));
                    }
                }
            }
        }
    }

    #[test]
    fn empty_pivots_extend_to_infinity() {
        let g = fixtures::cycle4();
        let e = g.edge_between(1, 2).unwrap();
        let dso = extend_dso(core(&g, 1), Vec::new());
        assert_eq!(dso.distance(0, 2, e), Dist::Inf);
    }

    #[test]
    fn no_window_pairs_on_dense_graph() {
        // Complete digraph, radius 54: every base distance is 1 < 54/18 and
        // every replacement distance is 2 < 3, so nothing is collected.
        let g = fixtures::complete(4);
        let data = Arc::new(apsp(&g));
        let dso = build_truncated_core(&g, data.clone(), Rat::from_integer(54));
        let everyone: Vec<usize> = (0..4).collect();
        let paths =
            collect_extension_paths(&g, &data, &everyone, &dso, &Rat::from_integer(54)).unwrap();
        assert!(paths.is_empty());
        let (pivots, _) = extend_pivots(&g, &data, &everyone, &dso, &Rat::from_integer(54), 1)
            .unwrap();
        assert!(pivots.is_empty());
    }

    #[test]
    fn radius_precondition_is_enforced() {
        let g = fixtures::cycle4();
        let data = Arc::new(apsp(&g));
        let dso = build_truncated_core(&g, data.clone(), Rat::from_integer(2));
        let everyone: Vec<usize> = (0..4).collect();
        assert!(matches!(
            collect_extension_paths(&g, &data, &everyone, &dso, &Rat::from_integer(3)),
            Err(Error::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn detour_replacement_path_is_collected_and_hit() {
        // Main chain 0..9 and a parallel chain of the same length; failing
        // an edge on the chosen route makes the other chain the replacement,
        // which must show up among the candidates and be hit by the pivots.
        let mut edges = Vec::new();
        for v in 0..9 {
            edges.push((v, v + 1, 1));
        }
        edges.push((0, 10, 1));
        for v in 10..17 {
            edges.push((v, v + 1, 1));
        }
        edges.push((17, 9, 1));
        let g = Graph::new(18, true, edges).unwrap();
        let data = Arc::new(apsp(&g));
        let r = Rat::from_integer(9);
        let dso = build_truncated_core(&g, data.clone(), r.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();

        let chosen = data.path(&g, 0, 9).unwrap();
        let failed = chosen.edge_ids(&g)[2];
        let replacement = exact::replacement_path(&g, 0, 9, &[failed]).unwrap();
        assert_eq!(replacement.length, 9);

        let paths = collect_extension_paths(&g, &data, &everyone, &dso, &r).unwrap();
        assert!(paths.iter().any(|p| p.vertices == replacement.vertices));
        let (pivots, _) = extend_pivots(&g, &data, &everyone, &dso, &r, 1).unwrap();
        assert!(replacement.vertices.iter().any(|v| pivots.contains(v)));
    }

    #[test]
    fn pivot_window_is_hit_after_extension() {
        // Every replacement distance in [r/2 - M, r] must route through a
        // selected pivot with exact additivity.
        let g = gen::random_strongly_connected(20, 60, 1, 2).unwrap();
        let data = Arc::new(apsp(&g));
        let r = Rat::from_integer(6);
        let dso = build_truncated_core(&g, data.clone(), r.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();
        let (pivots, _) = extend_pivots(&g, &data, &everyone, &dso, &r, 1).unwrap();
        for s in 0..g.n() {
            for e in 0..g.m() {
                let truth = crate::sssp::sssp(&g, s, &[e]);
                for t in 0..g.n() {
                    let d = match truth.base_dist(t) {
                        Dist::Finite(d) if (2..=6).contains(&d) => d,
                        _ => continue,
                    };
                    let hit = pivots.iter().any(|&z| {
                        let a = truth.base_dist(z);
                        let b = exact::replacement_distance(&g, z, t, &[e]);
                        a + b == Dist::Finite(d)
                    });
                    assert!(hit, "unhit window triple ({s},{t},{e}) d={d}");
                }
            }
        }
    }

    #[test]
    fn extension_window_answers_exactly() {
        let g = gen::random_strongly_connected(14, 56, 1, 13).unwrap();
        let data = Arc::new(apsp(&g));
        let r = Rat::from_integer(4);
        let dso = build_truncated_core(&g, data.clone(), r.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();
        let (pivots, _) = extend_pivots(&g, &data, &everyone, &dso, &r, 1).unwrap();
        let extended = extend_dso(dso, pivots);
        for s in 0..g.n() {
            for t in 0..g.n() {
                for e in 0..g.m() {
                    let truth = exact::replacement_distance(&g, s, t, &[e]);
                    let got = extended.distance(s, t, e);
                    match truth {
                        Dist::Finite(d) if d <= 6 => assert_eq!(got, truth, "({s},{t},{e})"),
                        _ => assert_eq!(got, Dist::Inf, "({s},{t},{e})"),
                    }
                }
            }
        }
    }

    #[test]
    fn full_dso_on_cycle_answers_infinite() {
        let g = fixtures::cycle4();
        let (dso, _) = build_full_dso(&g, Rat::from_integer(1)).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                if s == t {
                    continue;
                }
                for e in 0..g.m() {
                    let truth = exact::replacement_distance(&g, s, t, &[e]);
                    assert_eq!(dso.distance(s, t, e), truth);
                }
            }
        }
    }

    #[test]
    fn full_dso_stats_are_deterministic() {
        let g = gen::random_strongly_connected(12, 36, 1, 30).unwrap();
        let (_, a) = build_full_dso(&g, Rat::from_integer(2)).unwrap();
        let (_, b) = build_full_dso(&g, Rat::from_integer(2)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
