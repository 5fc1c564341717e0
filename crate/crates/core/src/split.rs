//! Vertex-split transformation for unweighted digraphs: vertex `v` becomes
//! an arc `v- -> v+`, edge `(u,v)` becomes `(u+, v-)`. Removing the arc of
//! `v` is removing the vertex, and distances double exactly, which turns any
//! edge-failure oracle on the split graph into a vertex-failure oracle on
//! the original.

use std::sync::Arc;

use dashmap::DashMap;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::sssp::{apsp, sssp, ApspData, ShortestPaths};

pub struct SplitGraph {
    pub graph: Graph,
    n_orig: usize,
}

impl SplitGraph {
    pub fn new(g: &Graph) -> Result<SplitGraph> {
        if !g.is_unweighted() {
            return Err(Error::WeightedUnsupported);
        }
        let n = g.n();
        let mut edges: Vec<(usize, usize, u64)> = Vec::with_capacity(n + g.m());
        // Vertex arcs first: arc of vertex v has edge id v.
        for v in 0..n {
            edges.push((2 * v, 2 * v + 1, 1));
        }
        for e in g.edges() {
            edges.push((2 * e.tail + 1, 2 * e.head, 1));
        }
        Ok(SplitGraph {
            graph: Graph::new(2 * n, true, edges)?,
            n_orig: n,
        })
    }

    pub fn minus(&self, v: usize) -> usize {
        2 * v
    }

    /// Edge id of the split arc representing vertex `v`.
    pub fn vertex_arc(&self, v: usize) -> usize {
        v
    }

    /// Map a minus-to-minus path in the split graph back to the original:
    /// minus vertices appear at every other position.
    pub fn path_back(&self, split_path: &Path) -> Path {
        let vertices: Vec<usize> = split_path
            .vertices
            .iter()
            .filter(|&&v| v % 2 == 0)
            .map(|&v| v / 2)
            .collect();
        Path {
            vertices,
            length: split_path.length / 2,
        }
    }

    pub fn n_orig(&self) -> usize {
        self.n_orig
    }
}

/// Exact path-reporting oracle for single vertex failures, backed by the
/// split graph. Lazy per-(source, failed-vertex) rows, safe for concurrent
/// queries.
pub struct VertexFailureDso {
    split: SplitGraph,
    data: Arc<ApspData>,
    cache: DashMap<(usize, usize), Arc<ShortestPaths>>,
}

impl VertexFailureDso {
    pub fn new(g: &Graph) -> Result<VertexFailureDso> {
        let split = SplitGraph::new(g)?;
        let data = Arc::new(apsp(&split.graph));
        Ok(VertexFailureDso {
            split,
            data,
            cache: DashMap::new(),
        })
    }

    fn row(&self, s: usize, v: usize) -> Arc<ShortestPaths> {
        self.cache
            .entry((s, v))
            .or_insert_with(|| {
                Arc::new(sssp(
                    &self.split.graph,
                    self.split.minus(s),
                    &[self.split.vertex_arc(v)],
                ))
            })
            .clone()
    }

    /// Distance from `s` to `t` in the original graph with vertex `v`
    /// removed (in original units).
    pub fn distance(&self, s: usize, t: usize, v: usize) -> Dist {
        if s == t {
            return if s == v { Dist::Inf } else { Dist::Finite(0) };
        }
        let sm = self.split.minus(s);
        let tm = self.split.minus(t);
        let arc = self.split.vertex_arc(v);
        let d = if self.data.on_chosen_path(&self.split.graph, sm, tm, arc) {
            self.row(s, v).base_dist(tm)
        } else {
            self.data.dist(sm, tm)
        };
        match d {
            Dist::Finite(x) => Dist::Finite(x / 2),
            Dist::Inf => Dist::Inf,
        }
    }

    pub fn path(&self, s: usize, t: usize, v: usize) -> Option<Path> {
        if s == t {
            return None;
        }
        let sm = self.split.minus(s);
        let tm = self.split.minus(t);
        let arc = self.split.vertex_arc(v);
        let split_path = if self.data.on_chosen_path(&self.split.graph, sm, tm, arc) {
            self.row(s, v).path_to(&self.split.graph, sm, tm)?
        } else {
            self.data.path(&self.split.graph, sm, tm)?
        };
        Some(self.split.path_back(&split_path))
    }
}
