//! End-to-end verification suites. Each suite generates seeded instances,
//! builds the structure under test, sweeps it against an independent
//! recomputation (plain breadth-first or textbook Dijkstra, never the
//! perturbed machinery the oracles are built on), and returns a
//! [`RunReport`] with one named check per guarantee.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::time::Instant;

use rand::Rng;
use serde_json::json;

use crate::dag_feo;
use crate::dist::{rat_to_string, Dist, Rat};
use crate::dso::{self, ReferenceDso};
use crate::error::{Error, Result};
use crate::exact;
use crate::fdo;
use crate::feo;
use crate::gen;
use crate::graph::Graph;
use crate::greedy;
use crate::hierarchy;
use crate::lowerbound::{self, BinaryMatrix};
use crate::par;
use crate::report::{params, RunReport};
use crate::split::VertexFailureDso;
use crate::ssrp;
use crate::sssp::apsp;
use std::sync::Arc;

/// Textbook Dijkstra on raw weights; the independent side of every
/// oracle-equivalence check.
pub fn plain_dijkstra(g: &Graph, s: usize, banned: &[usize]) -> Vec<Dist> {
    let mut banned_mask = vec![false; g.m()];
    for &e in banned {
        banned_mask[e] = true;
    }
    let mut dist = vec![Dist::Inf; g.n()];
    let mut heap = BinaryHeap::new();
    dist[s] = Dist::Finite(0);
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v] != Dist::Finite(d) {
            continue;
        }
        for &e in g.out_edges(v) {
            if banned_mask[e] {
                continue;
            }
            let u = g.edge(e).head;
            let cand = Dist::Finite(d + g.edge(e).weight);
            if cand < dist[u] {
                dist[u] = cand;
                heap.push(Reverse((d + g.edge(e).weight, u)));
            }
        }
    }
    dist
}

pub fn plain_eccentricity(g: &Graph, s: usize, banned: &[usize]) -> Dist {
    plain_dijkstra(g, s, banned)
        .into_iter()
        .max()
        .unwrap_or(Dist::Finite(0))
}

pub fn plain_diameter(g: &Graph, banned: &[usize]) -> Dist {
    (0..g.n())
        .map(|s| plain_eccentricity(g, s, banned))
        .max()
        .unwrap_or(Dist::Finite(0))
}

fn finish(mut report: RunReport, started: Instant) -> RunReport {
    report.wall_ms = started.elapsed().as_millis() as u64;
    report
}

/// Diameter-oracle stretch with deterministic pivots: on every graph and
/// for every failed edge the answer must lie in
/// `[diam(G-e), (1+eps) * diam(G-e)]`, infinity matched exactly.
pub fn run_fdo_suite(n: usize, graphs: usize, seed: u64, eps: &Rat) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "fdo",
        params(&[
            ("n", json!(n)),
            ("graphs", json!(graphs)),
            ("seed", json!(seed)),
            ("eps", json!(rat_to_string(eps))),
        ]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    let per_graph: Vec<Result<(usize, usize, usize, u64, f64)>> = par::map_items(&idx, |i| {
        let g = gen::random_strongly_connected(n, 4 * n, 1, seed + i as u64)?;
        let data = Arc::new(apsp(&g));
        let dsoref = ReferenceDso::new(&g, data.clone());
        let h = hierarchy::build_hierarchy(&g, &data, &dsoref, &Rat::from_integer(2), false)?;
        let diam0 = plain_diameter(&g, &[])
            .finite()
            .ok_or(Error::NotStronglyConnected)?;
        let pivots = match fdo::derandomized_pivots(&h, eps, diam0) {
            Ok(p) => p,
            Err(Error::DiameterTooSmall) => (0..g.n()).collect(),
            Err(e) => return Err(e),
        };
        let pivot_count = pivots.len();
        let oracle = fdo::build_fdo(&g, eps.clone(), pivots, &dsoref)?;
        let mut violations = 0;
        for e in 0..g.m() {
            let truth = plain_diameter(&g, &[e]);
            if !fdo_answer_ok(&oracle.eps, fdo::query_fdo(&oracle, e)?, truth) {
                violations += 1;
            }
        }
        let x_bound = n as f64 + (n as f64).powf(2.0 / 3.0) * (pivot_count as f64).powi(2);
        Ok((violations, oracle.x.len(), pivot_count, diam0, x_bound))
    });

    let mut violations = 0;
    let mut details = Vec::new();
    for (i, r) in per_graph.into_iter().enumerate() {
        let (v, x_len, pivots, diam0, x_bound) = r?;
        violations += v;
        if i == 0 {
            report.counter("first_graph_diam0", diam0);
            report.counter("first_graph_pivots", pivots);
            report.counter("first_graph_x_size", x_len);
            report.counter("first_graph_x_bound", x_bound);
        }
        if v > 0 {
            details.push(format!("graph {i}: {v}"));
        }
    }
    report.check(
        "stretch-derandomized",
        violations,
        if details.is_empty() {
            format!("{graphs} graphs, every edge within [d, (1+eps)d]")
        } else {
            details.join("; ")
        },
    );
    Ok(finish(report, started))
}

fn fdo_answer_ok(eps: &Rat, answer: fdo::Estimate, truth: Dist) -> bool {
    match (answer, truth) {
        (fdo::Estimate::Inf, Dist::Inf) => true,
        (fdo::Estimate::Finite(est), Dist::Finite(d)) => {
            let d = Rat::from_integer(d as u128);
            est >= d && est <= (Rat::from_integer(1) + eps.clone()) * d
        }
        _ => false,
    }
}

/// Same sweep with seeded sampled pivots; a sampling seed passes when every
/// graph is violation-free, and the suite passes when at least 95% of seeds
/// do.
pub fn run_fdo_sampled_suite(
    n: usize,
    graphs: usize,
    seed: u64,
    eps: &Rat,
    c: f64,
    sample_seeds: u64,
) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "fdo-sampled",
        params(&[
            ("n", json!(n)),
            ("graphs", json!(graphs)),
            ("seed", json!(seed)),
            ("eps", json!(rat_to_string(eps))),
            ("c", json!(c)),
            ("sample_seeds", json!(sample_seeds)),
        ]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    // Per graph: which sampling seeds produce a violation.
    let per_graph: Vec<Result<Vec<bool>>> = par::map_items(&idx, |i| {
        let g = gen::random_strongly_connected(n, 4 * n, 1, seed + i as u64)?;
        let data = Arc::new(apsp(&g));
        let dsoref = ReferenceDso::new(&g, data.clone());
        let diam0 = plain_diameter(&g, &[])
            .finite()
            .ok_or(Error::NotStronglyConnected)?;
        let truths: Vec<Dist> = (0..g.m()).map(|e| plain_diameter(&g, &[e])).collect();
        let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
        let l = eps_f * diam0 as f64 / 2.0;

        let mut by_pivots: HashMap<Vec<usize>, fdo::FdoOracle> = HashMap::new();
        let mut seed_ok = Vec::with_capacity(sample_seeds as usize);
        for s in 0..sample_seeds {
            let pivots = match fdo::sample_pivots(g.n(), l, c, s) {
                Ok(p) => p,
                Err(Error::SamplingLengthTooSmall { .. }) => (0..g.n()).collect(),
                Err(e) => return Err(e),
            };
            let oracle = match by_pivots.entry(pivots.clone()) {
                std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(fdo::build_fdo(&g, eps.clone(), pivots, &dsoref)?)
                }
            };
            let ok = (0..g.m()).all(|e| {
                fdo_answer_ok(eps, fdo::query_fdo(oracle, e).unwrap(), truths[e])
            });
            seed_ok.push(ok);
        }
        Ok(seed_ok)
    });

    let mut seed_ok = vec![true; sample_seeds as usize];
    for r in per_graph {
        for (s, ok) in r?.into_iter().enumerate() {
            seed_ok[s] &= ok;
        }
    }
    let good = seed_ok.iter().filter(|&&ok| ok).count() as u64;
    let needed = (sample_seeds * 95).div_ceil(100);
    report.counter("violation_free_seeds", good);
    report.counter("required_seeds", needed);
    report.check(
        "stretch-sampled-95pct",
        (needed.saturating_sub(good)) as usize,
        format!("{good}/{sample_seeds} seeds violation-free (need {needed})"),
    );
    Ok(finish(report, started))
}

/// Hierarchy guarantees: exhaustive hitting sweeps over edge failures,
/// vertex failures, and the failure-free case, plus the per-level size
/// bound `8 * (n / 2^i) * ln n`.
pub fn run_hdph_suite(n: usize, graphs: usize, seed: u64) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "hdph",
        params(&[("n", json!(n)), ("graphs", json!(graphs)), ("seed", json!(seed))]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    let per_graph: Vec<Result<(usize, usize, usize, Vec<usize>, Vec<String>)>> =
        par::map_items(&idx, |i| {
            let g = gen::random_strongly_connected(n, 4 * n, 1, seed + i as u64)?;
            let data = Arc::new(apsp(&g));
            let dsoref = ReferenceDso::new(&g, data.clone());
            let h =
                hierarchy::build_hierarchy(&g, &data, &dsoref, &Rat::from_integer(2), true)?;
            let rep = hierarchy::verify_hierarchy(&g, &h, true)?;
            let free = rep
                .violations
                .iter()
                .filter(|v| v.failure == "none")
                .count();
            let failures = rep.violations.len() - free;
            let mut size_violations = Vec::new();
            for (lvl, pivots) in h.levels.iter().enumerate() {
                let bound = 8.0 * (n as f64 / 2f64.powi(lvl as i32)) * (n as f64).ln();
                if pivots.len() as f64 > bound {
                    size_violations.push(format!(
                        "graph {i} level {lvl}: |B|={} > {bound:.2}",
                        pivots.len()
                    ));
                }
            }
            let sizes = h.levels.iter().map(Vec::len).collect();
            Ok((failures, free, rep.pairs_checked, sizes, size_violations))
        });

    let mut hit_violations = 0;
    let mut free_violations = 0;
    let mut pairs = 0usize;
    let mut size_violations = Vec::new();
    for (i, r) in per_graph.into_iter().enumerate() {
        let (failures, free, checked, sizes, sv) = r?;
        hit_violations += failures;
        free_violations += free;
        pairs += checked;
        size_violations.extend(sv);
        if i == 0 {
            report.counter("first_graph_level_sizes", json!(sizes));
        }
    }
    report.counter("pairs_checked", pairs);
    report.check(
        "hitting-under-failures",
        hit_violations,
        "replacement distance decomposes through a level pivot",
    );
    report.check(
        "hitting-failure-free",
        free_violations,
        "base distance decomposes through a level pivot",
    );
    report.check(
        "level-sizes-8x",
        size_violations.len(),
        if size_violations.is_empty() {
            "all levels within 8 (n/2^i) ln n".to_string()
        } else {
            size_violations.join("; ")
        },
    );
    Ok(finish(report, started))
}

/// Greedy cover bound over random path families.
pub fn run_greedy_suite(families: usize, seed: u64) -> RunReport {
    let started = Instant::now();
    let mut report = RunReport::new(
        "greedy",
        params(&[("families", json!(families)), ("seed", json!(seed))]),
    );
    let n = 256usize;
    let mut rng = gen::rng_from_seed(seed);
    let mut cover_violations = 0;
    let mut size_violations = 0;
    for family in 0..families {
        let l = [4usize, 8, 16][family % 3];
        let q = rng.gen_range(1..=500);
        let mut sets = Vec::with_capacity(q);
        for _ in 0..q {
            let extra = rng.gen_range(0..=8);
            let mut set = Vec::new();
            while set.len() < l + extra {
                let v = rng.gen_range(0..n);
                if !set.contains(&v) {
                    set.push(v);
                }
            }
            sets.push(set);
        }
        let picked = greedy::greedy_pivot_selection(&sets, l).expect("sets are large enough");
        if !greedy::covers_all(&sets, l, &picked) {
            cover_violations += 1;
        }
        if picked.len() > greedy::greedy_size_bound(n, l, q) {
            size_violations += 1;
        }
    }
    report.check("covers-every-set", cover_violations, format!("{families} families"));
    report.check(
        "size-within-cover-bound",
        size_violations,
        "|B| <= ceil((n/L)(ln q + 1))",
    );
    finish(report, started)
}

/// Full-oracle equivalence: the grown truncated oracle must agree with a
/// textbook recomputation on every triple, and every reported path must be
/// simple, avoid its failure, and match its length.
pub fn run_dso_suite(
    unweighted: (usize, usize),
    weighted: (usize, usize),
    seed: u64,
) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "dso",
        params(&[
            ("unweighted_n", json!(unweighted.0)),
            ("unweighted_graphs", json!(unweighted.1)),
            ("weighted_n", json!(weighted.0)),
            ("weighted_graphs", json!(weighted.1)),
            ("seed", json!(seed)),
        ]),
    );

    let mut jobs: Vec<(usize, u64, u64)> = Vec::new();
    for i in 0..unweighted.1 {
        jobs.push((unweighted.0, 1, seed + i as u64));
    }
    for i in 0..weighted.1 {
        jobs.push((weighted.0, 3, seed + 1000 + i as u64));
    }

    let results: Vec<Result<(usize, usize, Vec<(String, usize, usize)>)>> =
        par::map_items(&jobs, |(n, max_w, s)| {
            let g = gen::random_strongly_connected(n, 3 * n, max_w, s)?;
            let (full, stats) = dso::build_full_dso(&g, Rat::from_integer(2))?;
            let mut mismatches = 0;
            let mut bad_paths = 0;
            for e in 0..g.m() {
                for src in 0..g.n() {
                    let truth = plain_dijkstra(&g, src, &[e]);
                    for t in 0..g.n() {
                        let got = full.distance(src, t, e);
                        if got != truth[t] {
                            mismatches += 1;
                            continue;
                        }
                        if let Dist::Finite(d) = got {
                            match full.path(src, t, e) {
                                Some(p) if p.validate(&g, &[e]) && p.length == d => {}
                                _ => bad_paths += 1,
                            }
                        }
                    }
                }
            }
            let levels = stats
                .levels
                .iter()
                .map(|l| (l.radius.clone(), l.candidate_paths, l.pivots.len()))
                .collect();
            Ok((mismatches, bad_paths, levels))
        });

    let mut mismatches = 0;
    let mut bad_paths = 0;
    for (i, r) in results.into_iter().enumerate() {
        let (m, b, levels) = r?;
        mismatches += m;
        bad_paths += b;
        if i == 0 {
            report.counter(
                "first_graph_levels",
                json!(levels
                    .iter()
                    .map(|(r, p, b)| json!({"radius": r, "paths": p, "pivots": b}))
                    .collect::<Vec<_>>()),
            );
        }
    }
    report.check(
        "distance-equivalence",
        mismatches,
        "grown oracle vs textbook recomputation on all (s,t,e)",
    );
    report.check(
        "path-validity",
        bad_paths,
        "reported paths simple, failure-avoiding, length-exact",
    );
    Ok(finish(report, started))
}

/// Eccentricity-oracle sandwich plus the query-budget contract.
pub fn run_feo_suite(n: usize, graphs: usize, seed: u64, f: usize) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "feo",
        params(&[
            ("n", json!(n)),
            ("graphs", json!(graphs)),
            ("seed", json!(seed)),
            ("f", json!(f)),
        ]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    let per_graph: Vec<Result<(usize, usize)>> = par::map_items(&idx, |i| {
        let g = gen::random_strongly_connected(n, 4 * n, 1, seed + i as u64)?;
        let oracle = feo::build_feo(&g, feo::build_multi_dso(&g, f), Rat::from_integer(1), f)?;
        let mut sandwich = 0;
        let mut budget = 0;
        let mut check = |fails: &[usize]| -> Result<()> {
            for s in 0..g.n() {
                let before = oracle.dso().distance_queries();
                let est = oracle.query(&g, s, fails)?;
                if oracle.dso().distance_queries() - before != fails.len() as u64 {
                    budget += 1;
                }
                let truth = plain_dijkstra(&g, s, fails)
                    .into_iter()
                    .max()
                    .unwrap_or(Dist::Finite(0));
                let ok = match (est, truth) {
                    (Dist::Inf, Dist::Inf) => true,
                    (Dist::Finite(e), Dist::Finite(t)) => t <= e && e <= 2 * t,
                    _ => false,
                };
                if !ok {
                    sandwich += 1;
                }
            }
            Ok(())
        };
        for e in 0..g.m() {
            check(&[e])?;
        }
        let mut rng = gen::rng_from_seed(seed + 7000 + i as u64);
        for _ in 0..500 {
            let a = rng.gen_range(0..g.m());
            let b = rng.gen_range(0..g.m());
            if a != b {
                check(&[a.min(b), a.max(b)])?;
            }
        }
        Ok((sandwich, budget))
    });

    let mut sandwich = 0;
    let mut budget = 0;
    for r in per_graph {
        let (s, b) = r?;
        sandwich += s;
        budget += b;
    }
    report.check(
        "sandwich-2x",
        sandwich,
        "ecc(G-F) <= estimate <= 2 ecc(G-F), infinity matched",
    );
    report.check("query-budget", budget, "exactly |F| backing queries per call");
    Ok(finish(report, started))
}

/// DAG eccentricity oracle: sandwich within `f + 1`, candidate-list space,
/// and the scan budget.
pub fn run_dag_feo_suite(n: usize, graphs: usize, seed: u64, f: usize) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "dag-feo",
        params(&[
            ("n", json!(n)),
            ("graphs", json!(graphs)),
            ("seed", json!(seed)),
            ("f", json!(f)),
        ]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    let per_graph: Vec<Result<(usize, usize, usize)>> = par::map_items(&idx, |i| {
        let g = gen::random_dag(n, 3 * n, 3, seed + i as u64)?;
        let oracle = dag_feo::build_dag_feo(&g, 0, f)?;
        let mut space = 0;
        if oracle.stored_entries() > g.n() * (f + 1) {
            space += 1;
        }
        let mut sandwich = 0;
        let mut scans = 0;
        let mut check = |fails: &[usize]| {
            let (est, scanned) = oracle.query_counted(fails).expect("valid query");
            let f0 = fails
                .iter()
                .filter(|&&e| oracle.is_tree_edge[e])
                .count();
            let f1 = fails.len() - f0;
            if scanned > 2 * f0 + f1 {
                scans += 1;
            }
            let truth = plain_dijkstra(&g, 0, fails)
                .into_iter()
                .max()
                .unwrap_or(Dist::Finite(0));
            let ok = match (est, truth) {
                (Dist::Inf, Dist::Inf) => true,
                (Dist::Finite(e), Dist::Finite(t)) => t <= e && e <= (f as u64 + 1) * t,
                _ => false,
            };
            if !ok {
                sandwich += 1;
            }
        };
        check(&[]);
        for a in 0..g.m() {
            check(&[a]);
        }
        for a in 0..g.m() {
            for b in a + 1..g.m() {
                check(&[a, b]);
            }
        }
        let mut rng = gen::rng_from_seed(seed + 9000 + i as u64);
        let mut sampled = 0;
        while sampled < 500 {
            let mut fails: Vec<usize> = (0..3).map(|_| rng.gen_range(0..g.m())).collect();
            fails.sort_unstable();
            fails.dedup();
            if fails.len() == 3 {
                check(&fails);
                sampled += 1;
            }
        }
        Ok((sandwich, scans, space))
    });

    let mut sandwich = 0;
    let mut scans = 0;
    let mut space = 0;
    for r in per_graph {
        let (sw, sc, sp) = r?;
        sandwich += sw;
        scans += sc;
        space += sp;
    }
    report.check(
        "sandwich-f-plus-1",
        sandwich,
        "estimate within [ecc, (f+1) ecc], infinity matched",
    );
    report.check("scan-budget", scans, "entries scanned <= 2|F0| + |F1|");
    report.check("space-budget", space, "stored entries <= n (f+1)");
    Ok(finish(report, started))
}

/// Both incompressibility families: diameter dichotomy and decode
/// round-trip for the matrix family; failure-set size, connectivity
/// dichotomy, and decode round-trip for the tree family.
pub fn run_lb_suite(seed: u64, trials: usize) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "lb",
        params(&[("seed", json!(seed)), ("trials", json!(trials))]),
    );

    let mut rng = gen::rng_from_seed(seed);
    let mut base_diam = 0;
    let mut dichotomy = 0;
    let mut round_trip = 0;
    for d in [3usize, 4, 5] {
        for _ in 0..trials {
            let x = BinaryMatrix::random_admissible(4, &mut rng);
            let inst = lowerbound::gen_fdo_lb(64, 16, d, &x)?;
            if plain_diameter(&inst.graph, &[]) != Dist::Finite(d as u64) {
                base_diam += 1;
            }
            let raised = lowerbound::raised_diameter(d);
            for i in 0..inst.side {
                for j in 1..inst.side {
                    let got = plain_diameter(&inst.graph, &[inst.pair_edges[i][j]]);
                    let want = if x.get(i, j) {
                        Dist::Finite(d as u64)
                    } else {
                        Dist::Finite(raised)
                    };
                    if got != want {
                        dichotomy += 1;
                    }
                }
            }
            let decoded =
                lowerbound::decode_fdo_lb(&inst, |e| plain_diameter(&inst.graph, &[e]));
            if decoded != x {
                round_trip += 1;
            }
        }
    }
    report.check("diameter-family-base", base_diam, "generated diameter equals target");
    report.check(
        "diameter-family-dichotomy",
        dichotomy,
        "per-edge diameter in {D, raised(D)} matching the matrix",
    );
    report.check("diameter-family-decode", round_trip, "decode round-trips");

    let mut size_bad = 0;
    let mut conn_bad = 0;
    let mut conn_round_trip = 0;
    for f in [1usize, 2, 3] {
        let leaves = 1usize << f;
        let block = (1usize << (f + 2)) - 2;
        for _ in 0..trials {
            let xs: Vec<BinaryMatrix> = (0..2)
                .map(|_| BinaryMatrix::random_non_null(leaves, &mut rng))
                .collect();
            let inst = lowerbound::gen_conn_lb(2 * block + 2, f, &xs)?;
            for b in 0..2 {
                for j1 in 0..leaves {
                    for j2 in 0..leaves {
                        let fails = lowerbound::failure_set(&inst, b, j1, j2);
                        if fails.len() != 2 * f {
                            size_bad += 1;
                        }
                        let connected = exact::strongly_connected(&inst.graph, &fails, None);
                        if connected != xs[b].get(j1, j2) {
                            conn_bad += 1;
                        }
                    }
                }
            }
            let decoded = lowerbound::decode_conn_lb(&inst, |fails| {
                exact::strongly_connected(&inst.graph, fails, None)
            });
            if decoded != xs {
                conn_round_trip += 1;
            }
        }
    }
    report.check("connectivity-family-failure-size", size_bad, "|F| = 2f always");
    report.check(
        "connectivity-family-dichotomy",
        conn_bad,
        "strong connectivity of G-F equals the encoded bit",
    );
    report.check(
        "connectivity-family-decode",
        conn_round_trip,
        "decode round-trips",
    );
    Ok(finish(report, started))
}

/// Replacement-path hitting chain and the separator balance.
pub fn run_ssrp_suite(n: usize, graphs: usize, seed: u64) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(
        "ssrp",
        params(&[("n", json!(n)), ("graphs", json!(graphs)), ("seed", json!(seed))]),
    );

    let idx: Vec<usize> = (0..graphs).collect();
    let per_graph: Vec<Result<(usize, usize, usize)>> = par::map_items(&idx, |i| {
        let g = gen::random_reachable_digraph(n, 3 * n, seed + i as u64)?;
        let ctx = ssrp::make_context(&g, 0)?;
        let separator_bad = usize::from(!ctx.separator_balanced());
        let levels = ssrp::hitting_chain(&ctx)?;
        let mut violations = 0;
        let mut pairs = 0;
        for (k, level) in levels.iter().enumerate() {
            let rep = ssrp::verify_ssrp_hitting(&ctx, level, k as u32);
            violations += rep.violations.len();
            pairs += rep.relevant_pairs;
        }
        Ok((violations, separator_bad, pairs))
    });

    let mut violations = 0;
    let mut separator_bad = 0;
    let mut pairs = 0;
    for r in per_graph {
        let (v, s, p) = r?;
        violations += v;
        separator_bad += s;
        pairs += p;
    }
    report.counter("relevant_pairs_checked", pairs);
    report.check(
        "hitting-chain",
        violations,
        "every relevant pair decomposes through a level pivot",
    );
    report.check(
        "separator-balance",
        separator_bad,
        "n/3 <= |near|, |far| <= 2n/3 on every instance",
    );
    Ok(finish(report, started))
}

/// Pivot-count scaling of the grown oracle, logged for inspection: returns
/// the per-level table and the log-log slope of |B| against the radius.
pub fn pivot_scaling(n: usize, seed: u64, r1: u64) -> Result<(Vec<(String, usize)>, f64)> {
    let g = gen::random_strongly_connected(n, 4 * n, 1, seed)?;
    let (_, stats) = dso::build_full_dso(&g, Rat::from_integer(r1 as u128))?;
    let table: Vec<(String, usize)> = stats
        .levels
        .iter()
        .map(|l| (l.radius.clone(), l.pivots.len()))
        .collect();
    let points: Vec<(f64, f64)> = stats
        .levels
        .iter()
        .filter(|l| !l.pivots.is_empty())
        .map(|l| {
            let r: f64 = if let Some((p, q)) = l.radius.split_once('/') {
                p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()
            } else {
                l.radius.parse().unwrap()
            };
            (r.ln(), (l.pivots.len() as f64).ln())
        })
        .collect();
    let slope = least_squares_slope(&points);
    Ok((table, slope))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Independent replacement-distance spot check used by the library tests:
/// the perturbed single-source machinery against plain Dijkstra on random
/// graphs and failure sets.
pub fn replacement_oracle_agrees(n: usize, m: usize, max_w: u64, seed: u64, trials: usize) -> bool {
    let g = match gen::random_strongly_connected(n, m, max_w, seed) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let mut rng = gen::rng_from_seed(seed + 1);
    for _ in 0..trials {
        let k = rng.gen_range(0..=3usize);
        let fails: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.m())).collect();
        let s = rng.gen_range(0..g.n());
        let truth = plain_dijkstra(&g, s, &fails);
        let run = crate::sssp::sssp(&g, s, &fails);
        for t in 0..g.n() {
            if truth[t] != run.base_dist(t) {
                return false;
            }
        }
    }
    true
}

/// Breadth-first all-pairs matrix used by a few acceptance sweeps.
pub fn bfs_matrix_from(g: &Graph, banned: &[usize]) -> Vec<Vec<Dist>> {
    let mut banned_mask = vec![false; g.m()];
    for &e in banned {
        banned_mask[e] = true;
    }
    (0..g.n())
        .map(|s| {
            let mut dist = vec![Dist::Inf; g.n()];
            dist[s] = Dist::Finite(0);
            let mut queue = VecDeque::new();
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let dv = dist[v].finite().unwrap();
                for &e in g.out_edges(v) {
                    if banned_mask[e] {
                        continue;
                    }
                    let u = g.edge(e).head;
                    if !dist[u].is_finite() {
                        dist[u] = Dist::Finite(dv + 1);
                        queue.push_back(u);
                    }
                }
            }
            dist
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let r = run_greedy_suite(12, 3);
        assert!(r.passed(), "{}", r.render());
        let r = run_lb_suite(5, 2).unwrap();
        assert!(r.passed(), "{}", r.render());
        let r = run_ssrp_suite(24, 3, 11).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn fdo_and_feo_suites_pass_at_small_scale() {
        let r = run_fdo_suite(16, 3, 2, &Rat::new(1, 2)).unwrap();
        assert!(r.passed(), "{}", r.render());
        let r = run_feo_suite(12, 2, 3, 2).unwrap();
        assert!(r.passed(), "{}", r.render());
        let r = run_dag_feo_suite(14, 2, 4, 3).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn dso_suite_passes_at_small_scale() {
        let r = run_dso_suite((10, 2), (8, 1), 6).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn perturbed_sssp_matches_textbook_dijkstra() {
        for seed in 0..6u64 {
            assert!(replacement_oracle_agrees(18, 60, 3, seed, 40), "seed {seed}");
        }
    }

    #[test]
    fn reports_serialize() {
        let r = run_greedy_suite(3, 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"suite\":\"greedy\""));
    }
}
