//! Path-reporting distance sensitivity oracles for edge failures.
//!
//! [`ReferenceDso`] answers any `(s, t, e)` exactly and is the oracle other
//! constructions are measured against. [`MultiFailureDso`] generalizes to
//! failure sets of bounded size. The truncated oracle family and its
//! radius-growing extension live in [`truncated`].

mod truncated;

pub use truncated::{
    build_full_dso, build_truncated_core, collect_extension_paths, extend_dso, extend_pivots,
    FullDso, FullDsoStats, LevelStats, TruncatedDso,
};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::sssp::{sssp, ApspData, ShortestPaths};

/// Exact path-reporting single-edge-failure oracle.
///
/// An off-path failure leaves the stored shortest path intact, so the
/// all-pairs answer is returned directly. An on-path failure consults a
/// lazily cached single-source rerun keyed by `(source, failed edge)`. The
/// cache is concurrent; queries are safe from multiple threads.
pub struct ReferenceDso<'g> {
    g: &'g Graph,
    data: Arc<ApspData>,
    cache: DashMap<(usize, usize), Arc<ShortestPaths>>,
}

impl<'g> ReferenceDso<'g> {
    pub fn new(g: &'g Graph, data: Arc<ApspData>) -> Self {
        ReferenceDso {
            g,
            data,
            cache: DashMap::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn apsp(&self) -> &ApspData {
        &self.data
    }

    fn failure_row(&self, s: usize, e: usize) -> Arc<ShortestPaths> {
        self.cache
            .entry((s, e))
            .or_insert_with(|| Arc::new(sssp(self.g, s, &[e])))
            .clone()
    }

    pub fn distance(&self, s: usize, t: usize, e: usize) -> Dist {
        if s == t {
            return Dist::Finite(0);
        }
        if self.data.on_chosen_path(self.g, s, t, e) {
            self.failure_row(s, e).base_dist(t)
        } else {
            self.data.dist(s, t)
        }
    }

    pub fn path(&self, s: usize, t: usize, e: usize) -> Option<Path> {
        if s == t {
            return Some(Path {
                vertices: vec![s],
                length: 0,
            });
        }
        if self.data.on_chosen_path(self.g, s, t, e) {
            self.failure_row(s, e).path_to(self.g, s, t)
        } else {
            self.data.path(self.g, s, t)
        }
    }
}

/// Exact oracle for failure sets of size at most `f_max`, backed by cached
/// per-(source, failure-set) reruns. Distance queries are counted so callers
/// can assert how many they spend.
pub struct MultiFailureDso<'g> {
    g: &'g Graph,
    f_max: usize,
    cache: DashMap<(usize, Vec<usize>), Arc<ShortestPaths>>,
    queries: AtomicU64,
}

impl<'g> MultiFailureDso<'g> {
    pub fn new(g: &'g Graph, f_max: usize) -> Self {
        MultiFailureDso {
            g,
            f_max,
            cache: DashMap::new(),
            queries: AtomicU64::new(0),
        }
    }

    pub fn sensitivity(&self) -> usize {
        self.f_max
    }

    pub fn distance_queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    fn canonical(&self, fails: &[usize]) -> Result<Vec<usize>> {
        let mut key: Vec<usize> = fails.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() > self.f_max {
            return Err(Error::TooManyFailures {
                got: key.len(),
                max: self.f_max,
            });
        }
        if let Some(&e) = key.iter().find(|&&e| e >= self.g.m()) {
            return Err(Error::InvalidEdge(e));
        }
        Ok(key)
    }

    fn row(&self, s: usize, key: Vec<usize>) -> Arc<ShortestPaths> {
        self.cache
            .entry((s, key))
            .or_insert_with_key(|(s, key)| Arc::new(sssp(self.g, *s, key)))
            .clone()
    }

    pub fn distance(&self, s: usize, t: usize, fails: &[usize]) -> Result<Dist> {
        let key = self.canonical(fails)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.row(s, key).base_dist(t))
    }

    pub fn path(&self, s: usize, t: usize, fails: &[usize]) -> Result<Option<Path>> {
        let key = self.canonical(fails)?;
        Ok(self.row(s, key).path_to(self.g, s, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::gen::{self, fixtures};
    use crate::sssp::apsp;

    fn reference(g: &Graph) -> ReferenceDso<'_> {
        ReferenceDso::new(g, Arc::new(apsp(g)))
    }

    #[test]
    fn triangle_on_path_failure() {
        let g = fixtures::triangle();
        let dso = reference(&g);
        let e = g.edge_between(fixtures::TRI_A, fixtures::TRI_T).unwrap();
        assert_eq!(
            dso.distance(fixtures::TRI_S, fixtures::TRI_T, e),
            Dist::Finite(3)
        );
        let p = dso.path(fixtures::TRI_S, fixtures::TRI_T, e).unwrap();
        assert!(p.validate(&g, &[e]));
    }

    #[test]
    fn off_path_failure_is_free() {
        let g = fixtures::triangle();
        let dso = reference(&g);
        // The long direct edge s -> t is off the chosen two-hop path.
        let e = g.edge_between(fixtures::TRI_S, fixtures::TRI_T).unwrap();
        assert_eq!(
            dso.distance(fixtures::TRI_S, fixtures::TRI_T, e),
            Dist::Finite(2)
        );
    }

    #[test]
    fn cycle_failure_disconnects() {
        let g = fixtures::cycle4();
        let dso = reference(&g);
        let e = g.edge_between(1, 2).unwrap();
        assert_eq!(dso.distance(0, 2, e), Dist::Inf);
        assert!(dso.path(0, 2, e).is_none());
    }

    #[test]
    fn reference_matches_recomputation_everywhere() {
        let g = gen::random_strongly_connected(14, 50, 3, 21).unwrap();
        let dso = reference(&g);
        for e in 0..g.m() {
            for s in 0..g.n() {
                let truth = sssp(&g, s, &[e]);
                for t in 0..g.n() {
                    assert_eq!(dso.distance(s, t, e), truth.base_dist(t));
                }
            }
        }
    }

    #[test]
    fn multi_failure_oracle() {
        let g = fixtures::cycle4();
        let dso = MultiFailureDso::new(&g, 2);
        let e12 = g.edge_between(1, 2).unwrap();
        let e30 = g.edge_between(3, 0).unwrap();
        assert_eq!(dso.distance(0, 2, &[]).unwrap(), Dist::Finite(2));
        assert_eq!(dso.distance(0, 2, &[e12, e30]).unwrap(), Dist::Inf);
        assert!(dso.distance(0, 2, &[0, 1, 2]).is_err());
        assert_eq!(dso.distance_queries(), 2);

        let tri = fixtures::triangle();
        let dso = MultiFailureDso::new(&tri, 1);
        let e = tri.edge_between(fixtures::TRI_A, fixtures::TRI_T).unwrap();
        assert_eq!(
            dso.distance(fixtures::TRI_S, fixtures::TRI_T, &[e]).unwrap(),
            Dist::Finite(3)
        );
    }

    #[test]
    fn multi_failure_matches_exact_recomputation() {
        let g = gen::random_strongly_connected(10, 32, 1, 4).unwrap();
        let dso = MultiFailureDso::new(&g, 3);
        let mut rng = gen::rng_from_seed(99);
        use rand::Rng;
        for _ in 0..200 {
            let k = rng.gen_range(0..=3);
            let fails: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.m())).collect();
            let s = rng.gen_range(0..g.n());
            let t = rng.gen_range(0..g.n());
            assert_eq!(
                dso.distance(s, t, &fails).unwrap(),
                exact::replacement_distance(&g, s, t, &fails)
            );
        }
    }
}
