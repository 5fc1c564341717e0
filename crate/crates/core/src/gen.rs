//! Seeded instance generators. All randomness comes from a caller-supplied
//! seed; repeated calls with the same parameters produce identical graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact;
use crate::graph::Graph;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_pairs(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    if m > pairs.len() {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the {} possible arcs",
            pairs.len()
        )));
    }
    pairs.partial_shuffle(rng, m);
    pairs.truncate(m);
    Ok(pairs)
}

fn weights(m: usize, max_weight: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..m)
        .map(|_| if max_weight <= 1 { 1 } else { rng.gen_range(1..=max_weight) })
        .collect()
}

/// Uniform random simple digraph with exactly `m` arcs.
pub fn random_digraph(n: usize, m: usize, max_weight: u64, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    let pairs = sample_pairs(n, m, &mut rng)?;
    let ws = weights(m, max_weight, &mut rng);
    Graph::new(
        n,
        true,
        pairs
            .into_iter()
            .zip(ws)
            .map(|((u, v), w)| (u, v, w))
            .collect(),
    )
}

/// Rejection-sample [`random_digraph`] until the result is strongly
/// connected.
pub fn random_strongly_connected(n: usize, m: usize, max_weight: u64, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..100_000 {
        let pairs = sample_pairs(n, m, &mut rng)?;
        let ws = weights(m, max_weight, &mut rng);
        let g = Graph::new(
            n,
            true,
            pairs
                .into_iter()
                .zip(ws)
                .map(|((u, v), w)| (u, v, w))
                .collect(),
        )?;
        if exact::strongly_connected(&g, &[], None) {
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no strongly connected graph with n = {n}, m = {m} found; increase m"
    )))
}

/// Rejection-sample until every vertex is reachable from vertex 0.
pub fn random_reachable_digraph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..100_000 {
        let pairs = sample_pairs(n, m, &mut rng)?;
        let g = Graph::new(n, true, pairs.into_iter().map(|(u, v)| (u, v, 1)).collect())?;
        if exact::reachable_count(&g, 0, &[], None) == n {
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no graph with all vertices reachable from 0 (n = {n}, m = {m}); increase m"
    )))
}

/// Random DAG on `n` vertices with `m` edges in which vertex 0 is the unique
/// source and reaches everything. Edges point forward along a hidden random
/// topological order.
pub fn random_dag(n: usize, m: usize, max_weight: u64, seed: u64) -> Result<Graph> {
    if n > 1 && m + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "need m >= n - 1 = {} to keep every vertex reachable",
            n - 1
        )));
    }
    if m > n * (n - 1) / 2 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the {} forward pairs",
            n * (n - 1) / 2
        )));
    }
    let mut rng = rng_from_seed(seed);
    // rank[v] = position in the topological order; vertex 0 is first.
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(&mut rng);
    order.insert(0, 0);
    let mut rank = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        rank[v] = pos;
    }

    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut used = std::collections::HashSet::new();
    // A spanning in-edge per non-source vertex keeps everything reachable.
    for pos in 1..n {
        let v = order[pos];
        let u = order[rng.gen_range(0..pos)];
        chosen.push((u, v));
        used.insert((u, v));
    }
    let mut forward: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .filter(|&(u, v)| rank[u] < rank[v] && !used.contains(&(u, v)))
        .collect();
    forward.shuffle(&mut rng);
    chosen.extend(forward.into_iter().take(m - chosen.len()));

    let ws = weights(chosen.len(), max_weight, &mut rng);
    Graph::new(
        n,
        true,
        chosen
            .into_iter()
            .zip(ws)
            .map(|((u, v), w)| (u, v, w))
            .collect(),
    )
}

/// Hand-built graphs shared across tests.
pub mod fixtures {
    use super::*;

    /// Directed 4-cycle 0 -> 1 -> 2 -> 3 -> 0, unit weights.
    pub fn cycle4() -> Graph {
        Graph::new(4, true, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap()
    }

    pub const TRI_S: usize = 0;
    pub const TRI_A: usize = 1;
    pub const TRI_T: usize = 2;

    /// s -> a (1), a -> t (1), s -> t (3), t -> s (1).
    pub fn triangle() -> Graph {
        Graph::new(
            3,
            true,
            vec![
                (TRI_S, TRI_A, 1),
                (TRI_A, TRI_T, 1),
                (TRI_S, TRI_T, 3),
                (TRI_T, TRI_S, 1),
            ],
        )
        .unwrap()
    }

    pub const DAG_S: usize = 0;
    pub const DAG_A: usize = 1;
    pub const DAG_B: usize = 2;

    /// s -> a (1), a -> b (1), s -> b (5).
    pub fn dag3() -> Graph {
        Graph::new(3, true, vec![(DAG_S, DAG_A, 1), (DAG_A, DAG_B, 1), (DAG_S, DAG_B, 5)]).unwrap()
    }

    /// Complete digraph (both arcs between every pair), unit weights.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    edges.push((u, v, 1));
                }
            }
        }
        Graph::new(n, true, edges).unwrap()
    }

    /// Single directed cycle on `n` vertices.
    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, true, (0..n).map(|v| (v, (v + 1) % n, 1)).collect()).unwrap()
    }
}
