//! Single-failure diameter oracles with multiplicative stretch `1 + eps`.
//!
//! The oracle stores the base diameter, the strong bridges (queries on them
//! answer infinity), and, for every shortest-path-tree edge whose failure
//! increases some pivot-pair distance, the largest such pivot-pair
//! replacement distance floored at the base diameter. Every other edge
//! answers `(1 + eps) * diam` directly. Pivots come either from seeded
//! sampling or from the deterministic hierarchy level just below
//! `eps * diam / 2`.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{rat_from_str, rat_to_string, Dist, Rat};
use crate::dso::ReferenceDso;
use crate::error::{Error, Result};
use crate::exact;
use crate::gen::rng_from_seed;
use crate::graph::Graph;
use crate::hierarchy::PivotHierarchy;
use crate::split::VertexFailureDso;
use crate::sssp::ApspData;

/// Query answer: an exact rational estimate or infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Estimate {
    Finite(Rat),
    Inf,
}

impl Estimate {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Estimate::Finite(r) => Some(r),
            Estimate::Inf => None,
        }
    }
}

impl std::fmt::Display for Estimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Estimate::Finite(r) => write!(f, "{}", rat_to_string(r)),
            Estimate::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FdoOracle {
    pub n: usize,
    pub m: usize,
    pub diam0: u64,
    pub eps: Rat,
    /// Tree edges whose failure stretches some pivot pair, with the stored
    /// estimate `max(max pivot-pair replacement distance, diam0)`.
    pub x: BTreeMap<usize, u64>,
    /// Strong bridges, sorted.
    pub y: Vec<usize>,
    /// Pivot set used at build time, kept for audit.
    pub pivots: Vec<usize>,
}

impl FdoOracle {
    /// The pivot density parameter `n / (eps * diam0)`.
    pub fn b(&self) -> Rat {
        Rat::from_integer(self.n as u128) / (self.eps.clone() * Rat::from_integer(self.diam0 as u128))
    }
}

/// Include each vertex independently with probability `c * ln(n) / l`,
/// reproducibly from `seed`. Errors when `l` is below `c * ln(n)` (the
/// regime where the concentration argument is void); at `l = c * ln(n)` the
/// probability is one and the whole vertex set is returned.
pub fn sample_pivots(n: usize, l: f64, c: f64, seed: u64) -> Result<Vec<usize>> {
    if l <= 0.0 {
        return Err(Error::InvalidParameter("sampling length must be positive".into()));
    }
    let floor = c * (n.max(1) as f64).ln();
    if l < floor {
        return Err(Error::SamplingLengthTooSmall { length: l, floor });
    }
    let p = (floor / l).min(1.0);
    let mut rng = rng_from_seed(seed);
    Ok((0..n).filter(|_| rng.gen_bool(p)).collect())
}

/// Deterministic pivot choice: the hierarchy level with the largest window
/// still below `eps * diam0 / 2`. Errors when even the bottom window does
/// not fit (callers fall back to the full vertex set).
pub fn derandomized_pivots(h: &PivotHierarchy, eps: &Rat, diam0: u64) -> Result<Vec<usize>> {
    if h.c != Rat::from_integer(2) {
        return Err(Error::InvalidParameter(
            "pivot hierarchy must be built with ratio 2".into(),
        ));
    }
    let threshold = eps.clone() * Rat::from_integer(diam0 as u128) / Rat::from_integer(2);
    if threshold <= Rat::from_integer(1) {
        return Err(Error::DiameterTooSmall);
    }
    let mut best = 0usize;
    for i in 0..=h.top_level() {
        let (lo, _) = h.window(i);
        if lo < threshold {
            best = i;
        }
    }
    Ok(h.levels[best].clone())
}

/// Build the oracle from an explicit pivot set and an exact edge-failure
/// oracle. The graph must be strongly connected.
pub fn build_fdo(
    g: &Graph,
    eps: Rat,
    pivots: Vec<usize>,
    dso: &ReferenceDso<'_>,
) -> Result<FdoOracle> {
    if eps <= Rat::from_integer(0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let diam0 = match exact::diameter(g, &[]) {
        Dist::Finite(d) => d,
        Dist::Inf => return Err(Error::NotStronglyConnected),
    };
    let y = exact::strong_bridges(g)?;
    let data = dso.apsp();

    // Union of the shortest-path out-trees rooted at the pivots.
    let mut tree_edges: BTreeSet<usize> = BTreeSet::new();
    for &b in &pivots {
        for t in 0..g.n() {
            if let Some(e) = data.row(b).parent_edge[t] {
                tree_edges.insert(e);
            }
        }
    }

    let mut x = BTreeMap::new();
    for &e in &tree_edges {
        if y.binary_search(&e).is_ok() {
            continue;
        }
        let mut phi = diam0;
        let mut raised = false;
        for &b1 in &pivots {
            for &b2 in &pivots {
                if b1 == b2 {
                    continue;
                }
                let base = data
                    .dist(b1, b2)
                    .finite()
                    .expect("strongly connected graph with infinite pivot distance");
                match dso.distance(b1, b2, e) {
                    Dist::Finite(v) => {
                        if v > base {
                            raised = true;
                            phi = phi.max(v);
                        }
                    }
                    Dist::Inf => unreachable!("non-bridge failure disconnected a pivot pair"),
                }
            }
        }
        if raised {
            x.insert(e, phi);
        }
    }

    Ok(FdoOracle {
        n: g.n(),
        m: g.m(),
        diam0,
        eps,
        x,
        y,
        pivots,
    })
}

/// Constant-lookup answer for a failed edge.
pub fn query_fdo(o: &FdoOracle, e: usize) -> Result<Estimate> {
    if e >= o.m {
        return Err(Error::InvalidEdge(e));
    }
    if o.y.binary_search(&e).is_ok() {
        return Ok(Estimate::Inf);
    }
    let slack = o.eps.clone() * Rat::from_integer(o.diam0 as u128);
    let base = match o.x.get(&e) {
        Some(&phi) => Rat::from_integer(phi as u128),
        None => Rat::from_integer(o.diam0 as u128),
    };
    Ok(Estimate::Finite(base + slack))
}

/// Vertex-failure variant of the oracle, backed by the split
/// transformation.
#[derive(Clone, Debug)]
pub struct FdoVertexOracle {
    pub n: usize,
    pub diam0: u64,
    pub eps: Rat,
    pub x: BTreeMap<usize, u64>,
    /// Vertices whose removal breaks strong connectivity, sorted.
    pub y: Vec<usize>,
    pub pivots: Vec<usize>,
}

pub fn build_fdo_vertex(
    g: &Graph,
    eps: Rat,
    pivots: Vec<usize>,
    data: &ApspData,
    vdso: &VertexFailureDso,
) -> Result<FdoVertexOracle> {
    if eps <= Rat::from_integer(0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let diam0 = match exact::diameter(g, &[]) {
        Dist::Finite(d) => d,
        Dist::Inf => return Err(Error::NotStronglyConnected),
    };
    let y = exact::strong_articulation_points(g)?;

    let mut x = BTreeMap::new();
    for v in 0..g.n() {
        if y.binary_search(&v).is_ok() {
            continue;
        }
        let mut phi = diam0;
        let mut raised = false;
        for &b1 in &pivots {
            for &b2 in &pivots {
                if b1 == b2 || b1 == v || b2 == v {
                    continue;
                }
                let base = data.dist(b1, b2).finite().expect("infinite pivot distance");
                if let Dist::Finite(d) = vdso.distance(b1, b2, v) {
                    if d > base {
                        raised = true;
                        phi = phi.max(d);
                    }
                }
            }
        }
        if raised {
            x.insert(v, phi);
        }
    }

    Ok(FdoVertexOracle {
        n: g.n(),
        diam0,
        eps,
        x,
        y,
        pivots,
    })
}

pub fn query_fdo_vertex(o: &FdoVertexOracle, v: usize) -> Result<Estimate> {
    if v >= o.n {
        return Err(Error::InvalidVertex(v));
    }
    if o.y.binary_search(&v).is_ok() {
        return Ok(Estimate::Inf);
    }
    let slack = o.eps.clone() * Rat::from_integer(o.diam0 as u128);
    let base = match o.x.get(&v) {
        Some(&phi) => Rat::from_integer(phi as u128),
        None => Rat::from_integer(o.diam0 as u128),
    };
    Ok(Estimate::Finite(base + slack))
}

/// Stretch parameter for the near-linear-space regime: `ceil(n^(5/6)) / D`.
pub fn suggested_eps(n: usize, diam0: u64) -> Rat {
    let num = (n as f64).powf(5.0 / 6.0).ceil() as u128;
    Rat::new(num.max(1), diam0.max(1) as u128)
}

/// Whether the diameter is large enough for the sublinear-space regime,
/// `D > n^(4/3) * ln n / (eps * sqrt(m))`. Informational only; callers warn
/// rather than fail, since the condition is asymptotic.
pub fn diameter_regime_ok(n: usize, m: usize, eps: &Rat, diam0: u64) -> bool {
    let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
    let bound = (n as f64).powf(4.0 / 3.0) * (n as f64).ln() / (eps_f * (m as f64).sqrt());
    diam0 as f64 > bound
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FdoXEntry {
    pub edge: usize,
    pub phi: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FdoFile {
    pub version: u32,
    pub n: usize,
    pub m: usize,
    pub diam0: u64,
    pub eps: String,
    pub x: Vec<FdoXEntry>,
    pub y: Vec<usize>,
    pub pivots: Vec<usize>,
}

impl FdoOracle {
    pub fn to_file(&self) -> FdoFile {
        FdoFile {
            version: 1,
            n: self.n,
            m: self.m,
            diam0: self.diam0,
            eps: rat_to_string(&self.eps),
            x: self
                .x
                .iter()
                .map(|(&edge, &phi)| FdoXEntry { edge, phi })
                .collect(),
            y: self.y.clone(),
            pivots: self.pivots.clone(),
        }
    }

    pub fn from_file(f: &FdoFile) -> Result<FdoOracle> {
        if f.version != 1 {
            return Err(Error::UnknownVersion(f.version));
        }
        Ok(FdoOracle {
            n: f.n,
            m: f.m,
            diam0: f.diam0,
            eps: rat_from_str(&f.eps)?,
            x: f.x.iter().map(|e| (e.edge, e.phi)).collect(),
            y: f.y.clone(),
            pivots: f.pivots.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dso::ReferenceDso;
    use crate::gen::{self, fixtures};
    use crate::sssp::apsp;
    use std::sync::Arc;

    fn rat(d: u64) -> Rat {
        Rat::from_integer(d as u128)
    }

    #[test]
    fn all_cycle_edges_answer_infinite() {
        let g = fixtures::cycle4();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let o = build_fdo(&g, Rat::new(1, 2), vec![0, 2], &dso).unwrap();
        assert_eq!(o.y, vec![0, 1, 2, 3]);
        for e in 0..4 {
            assert_eq!(query_fdo(&o, e).unwrap(), Estimate::Inf);
        }
    }

    #[test]
    fn empty_pivots_answer_uniform_stretch() {
        let g = gen::random_strongly_connected(12, 48, 1, 41).unwrap();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let o = build_fdo(&g, Rat::new(1, 2), Vec::new(), &dso).unwrap();
        assert!(o.x.is_empty());
        let expect = (Rat::from_integer(1) + Rat::new(1, 2)) * rat(o.diam0);
        for e in 0..g.m() {
            if o.y.binary_search(&e).is_err() {
                assert_eq!(query_fdo(&o, e).unwrap(), Estimate::Finite(expect.clone()));
            }
        }
    }

    #[test]
    fn full_pivots_catch_every_stretched_tree_edge() {
        let g = gen::random_strongly_connected(14, 56, 1, 7).unwrap();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();
        let o = build_fdo(&g, Rat::new(1, 4), everyone.clone(), &dso).unwrap();
        // Exhaustive cross-check of membership in the stretched-edge table.
        let mut tree_edges = std::collections::BTreeSet::new();
        for b in 0..g.n() {
            for t in 0..g.n() {
                if let Some(e) = data.row(b).parent_edge[t] {
                    tree_edges.insert(e);
                }
            }
        }
        for &e in &tree_edges {
            if o.y.binary_search(&e).is_ok() {
                continue;
            }
            let mut raised = false;
            for &b1 in &everyone {
                for &b2 in &everyone {
                    if b1 == b2 {
                        continue;
                    }
                    let base = data.dist(b1, b2);
                    if exact::replacement_distance(&g, b1, b2, &[e]) > base {
                        raised = true;
                    }
                }
            }
            assert_eq!(o.x.contains_key(&e), raised, "edge {e}");
        }
    }

    #[test]
    fn stretch_holds_with_full_pivots() {
        let g = gen::random_strongly_connected(15, 60, 1, 19).unwrap();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();
        let eps = Rat::new(1, 2);
        let o = build_fdo(&g, eps.clone(), everyone, &dso).unwrap();
        for e in 0..g.m() {
            let truth = exact::diameter(&g, &[e]);
            match query_fdo(&o, e).unwrap() {
                Estimate::Inf => assert_eq!(truth, Dist::Inf),
                Estimate::Finite(est) => {
                    let d = rat(truth.finite().expect("finite expected"));
                    assert!(est >= d, "edge {e}");
                    assert!(est <= (Rat::from_integer(1) + eps.clone()) * d, "edge {e}");
                }
            }
        }
    }

    #[test]
    fn vertex_variant_stretch() {
        let g = gen::random_strongly_connected(13, 52, 1, 23).unwrap();
        let data = Arc::new(apsp(&g));
        let vdso = VertexFailureDso::new(&g).unwrap();
        let everyone: Vec<usize> = (0..g.n()).collect();
        let eps = Rat::new(1, 2);
        let o = build_fdo_vertex(&g, eps.clone(), everyone, &data, &vdso).unwrap();
        for v in 0..g.n() {
            let truth = exact::diameter_without_vertex(&g, v);
            match query_fdo_vertex(&o, v).unwrap() {
                Estimate::Inf => assert_eq!(truth, Dist::Inf, "vertex {v}"),
                Estimate::Finite(est) => {
                    let d = rat(truth.finite().expect("finite expected"));
                    assert!(est >= d, "vertex {v}");
                    assert!(est <= (Rat::from_integer(1) + eps.clone()) * d, "vertex {v}");
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_and_concentrated() {
        let a = sample_pivots(1000, 100.0, 2.0, 11).unwrap();
        let b = sample_pivots(1000, 100.0, 2.0, 11).unwrap();
        assert_eq!(a, b);

        // Expected size is n * c * ln(n) / l; demand the usual 2x window in
        // at least 95 of 100 seeds.
        let expect = 1000.0 * 2.0 * (1000.0f64).ln() / 100.0;
        let mut ok = 0;
        for seed in 0..100 {
            let size = sample_pivots(1000, 100.0, 2.0, seed).unwrap().len() as f64;
            if size >= 0.5 * expect && size <= 2.0 * expect {
                ok += 1;
            }
        }
        assert!(ok >= 95, "only {ok} seeds in range");
    }

    #[test]
    fn sampling_degenerates_to_everyone_at_the_floor() {
        let n = 50;
        let floor = 2.0 * (n as f64).ln();
        let b = sample_pivots(n, floor, 2.0, 3).unwrap();
        assert_eq!(b.len(), n);
        assert!(matches!(
            sample_pivots(n, floor / 2.0, 2.0, 3),
            Err(Error::SamplingLengthTooSmall { .. })
        ));
    }

    #[test]
    fn derandomized_level_choice() {
        let g = fixtures::cycle(64);
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let h = crate::hierarchy::build_hierarchy(&g, &data, &dso, &rat(2), false).unwrap();
        // diam = 63, eps = 1/2: threshold 15.75 picks the window (8, 16].
        let picked = derandomized_pivots(&h, &Rat::new(1, 2), 63).unwrap();
        assert_eq!(picked, h.levels[3]);
        // Tiny threshold: no level at all.
        assert!(matches!(
            derandomized_pivots(&h, &Rat::new(1, 32), 63),
            Err(Error::DiameterTooSmall)
        ));
        // Threshold just above a power of two returns that level.
        let picked = derandomized_pivots(&h, &Rat::new(33, 4), 2).unwrap();
        // eps*D/2 = 33/4: largest 2^i below it is 2^4... capped by top level.
        let expect_level = (0..=h.top_level())
            .filter(|&i| h.window(i).0 < Rat::new(33, 4) * rat(2) / rat(2))
            .last()
            .unwrap();
        assert_eq!(picked, h.levels[expect_level]);
    }

    #[test]
    fn oracle_file_round_trip() {
        let g = gen::random_strongly_connected(12, 48, 1, 4).unwrap();
        let data = Arc::new(apsp(&g));
        let dso = ReferenceDso::new(&g, data.clone());
        let everyone: Vec<usize> = (0..g.n()).collect();
        let o = build_fdo(&g, Rat::new(1, 3), everyone, &dso).unwrap();
        let json = serde_json::to_string(&o.to_file()).unwrap();
        let back = FdoOracle::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        for e in 0..g.m() {
            assert_eq!(query_fdo(&o, e).unwrap(), query_fdo(&back, e).unwrap());
        }
    }
}
