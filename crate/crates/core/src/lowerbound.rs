//! Generators and decoders for the two incompressibility families: graphs
//! whose per-edge fault-tolerant diameters encode a binary matrix, and
//! graphs whose fault-tolerant connectivity under `2f` failures encodes a
//! tuple of binary matrices.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Square 0/1 matrix with text-grid serialization (one row of `0`/`1`
/// characters per line).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryMatrix {
    pub n: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn new(n: usize) -> Self {
        BinaryMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn all_ones(n: usize) -> Self {
        BinaryMatrix {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.n + j] = value;
    }

    pub fn is_non_null(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    pub fn has_ones_border(&self) -> bool {
        (0..self.n).all(|k| self.get(0, k) && self.get(k, 0))
    }

    /// Random matrix with an all-ones first row and column.
    pub fn random_admissible(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut x = BinaryMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                let v = i == 0 || j == 0 || rng.gen_bool(0.5);
                x.set(i, j, v);
            }
        }
        x
    }

    /// Random matrix guaranteed to contain at least one 1.
    pub fn random_non_null(n: usize, rng: &mut ChaCha8Rng) -> Self {
        loop {
            let mut x = BinaryMatrix::new(n);
            for i in 0..n {
                for j in 0..n {
                    x.set(i, j, rng.gen_bool(0.5));
                }
            }
            if x.is_non_null() {
                return x;
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<BinaryMatrix> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let n = rows.len();
        let mut x = BinaryMatrix::new(n);
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<char> = row.trim().chars().collect();
            if cells.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("matrix row has {} cells, expected {n}", cells.len()),
                });
            }
            for (j, c) in cells.iter().enumerate() {
                match c {
                    '0' => {}
                    '1' => x.set(i, j, true),
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("bad matrix cell: {other}"),
                        })
                    }
                }
            }
        }
        Ok(x)
    }
}

fn isqrt(m: usize) -> usize {
    let mut k = (m as f64).sqrt() as usize;
    while (k + 1) * (k + 1) <= m {
        k += 1;
    }
    while k * k > m {
        k -= 1;
    }
    k
}

/// Diameter-encoding instance. The matrix is recoverable from the
/// fault-tolerant diameters of the pairing edges `b_i -> c_j`.
pub struct FdoLbInstance {
    pub graph: Graph,
    pub d: usize,
    /// Matrix side length, `floor(sqrt(m))`.
    pub side: usize,
    pub x: BinaryMatrix,
    /// Edge id of `b_i -> c_j` per matrix cell.
    pub pair_edges: Vec<Vec<usize>>,
}

/// Diameter that a zero matrix entry produces when its pairing edge fails.
pub fn raised_diameter(d: usize) -> u64 {
    if d % 2 == 1 {
        ((3 * d - 1) / 2) as u64
    } else {
        (3 * d / 2 - 1) as u64
    }
}

/// Build the diameter-encoding graph.
///
/// Layout: `t` layers of chain vertices feeding `b`-vertices, a complete
/// bipartite `b -> c` block whose edges carry the queries, `t` layers of
/// chain vertices after the `c`s, return edges from the `c`/`d` side to the
/// first chain layer (through one extra relay vertex for even `d`), and a
/// reservoir of filler vertices hanging off the hubs.
pub fn gen_fdo_lb(n: usize, m: usize, d: usize, x: &BinaryMatrix) -> Result<FdoLbInstance> {
    let side = isqrt(m);
    if n < 4 || m < 4 || n * n < m || d < 3 {
        return Err(Error::InvalidParameter(
            "need n >= 4, 4 <= m <= n^2, d >= 3".into(),
        ));
    }
    if n <= d * side {
        return Err(Error::InvalidParameter(format!(
            "need n > d * floor(sqrt(m)) = {}",
            d * side
        )));
    }
    if x.n != side {
        return Err(Error::InvalidParameter(format!(
            "matrix side {} does not match floor(sqrt(m)) = {side}",
            x.n
        )));
    }
    if !x.has_ones_border() {
        return Err(Error::InvalidParameter(
            "matrix needs an all-ones first row and column".into(),
        ));
    }
    let odd = d % 2 == 1;
    let t = if odd { (d - 1) / 2 } else { d / 2 - 1 };
    let block = (2 * t + 2) * side;
    let relay_count = usize::from(!odd);
    if n < block + relay_count {
        return Err(Error::InvalidParameter(
            "not enough vertices for the chain layers".into(),
        ));
    }
    let reservoir = n - block - relay_count;

    let a = |k: usize, i: usize| k * side + i;
    let b = |i: usize| t * side + i;
    let c = |j: usize| (t + 1) * side + j;
    let dd = |k: usize, j: usize| (t + 2) * side + k * side + j;
    let relay = block;
    let filler = |l: usize| block + relay_count + l;

    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    for i in 0..side {
        for j in 0..side {
            if x.get(i, j) {
                edges.push((a(t - 1, i), c(j), 1));
            }
        }
    }
    for i in 0..side {
        for j in 0..side {
            if x.get(i, j) {
                edges.push((b(i), dd(0, j), 1));
            }
        }
    }
    for k in 0..t.saturating_sub(1) {
        for i in 0..side {
            edges.push((a(k, i), a(k + 1, i), 1));
        }
    }
    for i in 0..side {
        edges.push((a(t - 1, i), b(i), 1));
    }
    for j in 0..side {
        edges.push((c(j), dd(0, j), 1));
    }
    for k in 1..t {
        for j in 0..side {
            edges.push((dd(k - 1, j), dd(k, j), 1));
        }
    }
    let mut pair_edges = vec![vec![0usize; side]; side];
    for i in 0..side {
        for j in 0..side {
            pair_edges[i][j] = edges.len();
            edges.push((b(i), c(j), 1));
        }
    }
    let exits: Vec<usize> = (0..side)
        .map(c)
        .chain((0..t).flat_map(|k| (0..side).map(move |j| dd(k, j))))
        .collect();
    if odd {
        for &v in &exits {
            for i in 0..side {
                edges.push((v, a(0, i), 1));
            }
        }
    } else {
        for &v in &exits {
            edges.push((v, relay, 1));
        }
        for i in 0..side {
            edges.push((relay, a(0, i), 1));
        }
    }
    for l in 0..reservoir {
        edges.push((filler(l), c(0), 1));
        edges.push((c(0), filler(l), 1));
        edges.push((filler(l), a(0, 0), 1));
    }

    Ok(FdoLbInstance {
        graph: Graph::new(n, true, edges)?,
        d,
        side,
        x: x.clone(),
        pair_edges,
    })
}

/// Recover the matrix: a cell is 1 exactly when failing its pairing edge
/// keeps the diameter at `d`. The first row and column are forced (their
/// cells are 1 in every admissible matrix, and the column-0 edges double as
/// hub edges whose failure is not dichotomous).
pub fn decode_fdo_lb(inst: &FdoLbInstance, diam_query: impl Fn(usize) -> Dist) -> BinaryMatrix {
    let mut x = BinaryMatrix::new(inst.side);
    for i in 0..inst.side {
        for j in 0..inst.side {
            let bit = if i == 0 || j == 0 {
                true
            } else {
                diam_query(inst.pair_edges[i][j]) == Dist::Finite(inst.d as u64)
            };
            x.set(i, j, bit);
        }
    }
    x
}

/// Connectivity-encoding instance: per matrix a block of two complete
/// binary trees of height `f` (edges directed down the left tree, up the
/// right one) joined leaf-to-leaf where the matrix has ones.
pub struct ConnLbInstance {
    pub graph: Graph,
    pub f: usize,
    pub blocks: usize,
    pub xs: Vec<BinaryMatrix>,
    tree_size: usize,
    block_size: usize,
}

impl ConnLbInstance {
    pub fn leaves(&self) -> usize {
        1 << self.f
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    fn left(&self, block: usize, heap: usize) -> usize {
        block * self.block_size + heap - 1
    }

    fn right(&self, block: usize, heap: usize) -> usize {
        block * self.block_size + self.tree_size + heap - 1
    }

    pub fn source(&self, block: usize) -> usize {
        self.left(block, 1)
    }

    pub fn sink(&self, block: usize) -> usize {
        self.right(block, 1)
    }

    pub fn left_leaf(&self, block: usize, j: usize) -> usize {
        self.left(block, (1 << self.f) + j)
    }

    pub fn right_leaf(&self, block: usize, j: usize) -> usize {
        self.right(block, (1 << self.f) + j)
    }
}

/// Build the connectivity-encoding graph.
///
/// Beyond the trees, the leaf pairing, the block chain, and the wrap-around
/// edges from the last sink, every block vertex other than its source and
/// sink gets a return edge to the block source. Without those return edges
/// the subtrees cut off by a failure set would be dead ends and the graph
/// minus any failure set could never be strongly connected, collapsing the
/// encoding; the return edges restore the one direction without creating a
/// source-to-sink bypass in the other.
pub fn gen_conn_lb(n: usize, f: usize, xs: &[BinaryMatrix]) -> Result<ConnLbInstance> {
    if f == 0 {
        return Err(Error::InvalidParameter("need f >= 1".into()));
    }
    if xs.is_empty() {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    let leaves = 1usize << f;
    let tree_size = 2 * leaves - 1;
    let block_size = 2 * tree_size;
    let blocks = xs.len();
    if n < blocks * block_size {
        return Err(Error::InvalidParameter(format!(
            "need n >= {} for {blocks} blocks",
            blocks * block_size
        )));
    }
    for (i, x) in xs.iter().enumerate() {
        if x.n != leaves {
            return Err(Error::InvalidParameter(format!(
                "matrix {i} has side {}, expected {leaves}",
                x.n
            )));
        }
        if !x.is_non_null() {
            return Err(Error::InvalidParameter(format!("matrix {i} is all-zero")));
        }
    }

    let inst_dims = ConnLbInstance {
        graph: Graph::new(0, true, vec![])?,
        f,
        blocks,
        xs: xs.to_vec(),
        tree_size,
        block_size,
    };

    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    for i in 0..blocks {
        for h in 2..=tree_size {
            edges.push((inst_dims.left(i, h / 2), inst_dims.left(i, h), 1));
        }
        for h in 2..=tree_size {
            edges.push((inst_dims.right(i, h), inst_dims.right(i, h / 2), 1));
        }
        for j1 in 0..leaves {
            for j2 in 0..leaves {
                if xs[i].get(j1, j2) {
                    edges.push((inst_dims.left_leaf(i, j1), inst_dims.right_leaf(i, j2), 1));
                }
            }
        }
        let s = inst_dims.source(i);
        let t = inst_dims.sink(i);
        for v in i * block_size..(i + 1) * block_size {
            if v != s && v != t {
                edges.push((v, s, 1));
            }
        }
    }
    for i in 1..blocks {
        edges.push((inst_dims.sink(i - 1), inst_dims.source(i), 1));
    }
    let last_sink = inst_dims.sink(blocks - 1);
    for v in 0..n {
        if v != last_sink {
            edges.push((last_sink, v, 1));
        }
    }
    for p in blocks * block_size..n {
        edges.push((p, inst_dims.source(0), 1));
    }

    Ok(ConnLbInstance {
        graph: Graph::new(n, true, edges)?,
        ..inst_dims
    })
}

/// The `2f` tree edges that isolate the root-to-leaf path to `left leaf j1`
/// and the leaf-to-root path from `right leaf j2` in block `i`: the edges
/// into each off-path child on the way down, and the mirrored edges on the
/// way up.
pub fn failure_set(inst: &ConnLbInstance, block: usize, j1: usize, j2: usize) -> Vec<usize> {
    let mut fails = Vec::with_capacity(2 * inst.f);
    let heap_path = |leaf_heap: usize| {
        let mut path = Vec::new();
        let mut h = leaf_heap;
        while h >= 1 {
            path.push(h);
            h /= 2;
        }
        path.reverse();
        path
    };
    let down = heap_path((1 << inst.f) + j1);
    for step in down.windows(2) {
        let sibling = step[1] ^ 1;
        let e = inst
            .graph
            .edge_between(inst.left(block, step[0]), inst.left(block, sibling))
            .expect("missing left tree edge");
        fails.push(e);
    }
    let up = heap_path((1 << inst.f) + j2);
    for step in up.windows(2) {
        let sibling = step[1] ^ 1;
        let e = inst
            .graph
            .edge_between(inst.right(block, sibling), inst.right(block, step[0]))
            .expect("missing right tree edge");
        fails.push(e);
    }
    fails
}

/// Recover every matrix by probing strong connectivity under each cell's
/// failure set.
pub fn decode_conn_lb(
    inst: &ConnLbInstance,
    connected_query: impl Fn(&[usize]) -> bool,
) -> Vec<BinaryMatrix> {
    let leaves = inst.leaves();
    (0..inst.blocks)
        .map(|i| {
            let mut x = BinaryMatrix::new(leaves);
            for j1 in 0..leaves {
                for j2 in 0..leaves {
                    x.set(j1, j2, connected_query(&failure_set(inst, i, j1, j2)));
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::gen::rng_from_seed;

    #[test]
    fn matrix_text_round_trip() {
        let mut rng = rng_from_seed(1);
        let x = BinaryMatrix::random_admissible(4, &mut rng);
        let back = BinaryMatrix::parse(&x.to_text()).unwrap();
        assert_eq!(x, back);
        assert!(x.has_ones_border());
    }

    #[test]
    fn all_ones_instance_has_target_diameter() {
        let x = BinaryMatrix::all_ones(4);
        let inst = gen_fdo_lb(64, 16, 3, &x).unwrap();
        assert_eq!(inst.graph.n(), 64);
        assert_eq!(exact::diameter(&inst.graph, &[]), Dist::Finite(3));
        let even = gen_fdo_lb(64, 16, 4, &x).unwrap();
        assert_eq!(exact::diameter(&even.graph, &[]), Dist::Finite(4));
        let d5 = gen_fdo_lb(64, 16, 5, &x).unwrap();
        assert_eq!(exact::diameter(&d5.graph, &[]), Dist::Finite(5));
    }

    #[test]
    fn zero_cell_raises_diameter() {
        let mut x = BinaryMatrix::all_ones(4);
        x.set(1, 2, false);
        let inst = gen_fdo_lb(64, 16, 3, &x).unwrap();
        assert_eq!(exact::diameter(&inst.graph, &[]), Dist::Finite(3));
        let e = inst.pair_edges[1][2];
        assert_eq!(exact::diameter(&inst.graph, &[e]), Dist::Finite(raised_diameter(3)));
        assert_eq!(raised_diameter(3), 4);
        assert_eq!(raised_diameter(4), 5);
    }

    #[test]
    fn decode_round_trips() {
        let mut rng = rng_from_seed(7);
        for d in [3usize, 4] {
            let x = BinaryMatrix::random_admissible(4, &mut rng);
            let inst = gen_fdo_lb(64, 16, d, &x).unwrap();
            let decoded =
                decode_fdo_lb(&inst, |e| exact::diameter(&inst.graph, &[e]));
            assert_eq!(decoded, x, "d = {d}");
        }
    }

    #[test]
    fn parameter_validation() {
        let x = BinaryMatrix::all_ones(4);
        assert!(gen_fdo_lb(64, 16, 2, &x).is_err());
        assert!(gen_fdo_lb(12, 16, 3, &x).is_err());
        let mut bad = BinaryMatrix::all_ones(4);
        bad.set(0, 2, false);
        assert!(gen_fdo_lb(64, 16, 3, &bad).is_err());
    }

    #[test]
    fn block_sizes() {
        let mut x1 = BinaryMatrix::new(2);
        x1.set(0, 0, true);
        x1.set(1, 1, true);
        let inst = gen_conn_lb(6, 1, &[x1]).unwrap();
        assert_eq!(inst.block_size(), 6);
        let x2 = BinaryMatrix::all_ones(4);
        let inst = gen_conn_lb(14, 2, &[x2]).unwrap();
        assert_eq!(inst.block_size(), 14);
    }

    #[test]
    fn non_null_blocks_make_the_graph_strongly_connected() {
        let mut rng = rng_from_seed(3);
        let xs: Vec<BinaryMatrix> = (0..2).map(|_| BinaryMatrix::random_non_null(4, &mut rng)).collect();
        let inst = gen_conn_lb(2 * 14 + 3, 2, &xs).unwrap();
        assert!(exact::strongly_connected(&inst.graph, &[], None));
    }

    #[test]
    fn failure_sets_have_exactly_two_f_tree_edges() {
        let mut rng = rng_from_seed(5);
        let xs: Vec<BinaryMatrix> = (0..2).map(|_| BinaryMatrix::random_non_null(8, &mut rng)).collect();
        let inst = gen_conn_lb(2 * 30, 3, &xs).unwrap();
        for j1 in 0..8 {
            for j2 in 0..8 {
                let fails = failure_set(&inst, 1, j1, j2);
                assert_eq!(fails.len(), 6);
                for &e in &fails {
                    let edge = inst.graph.edge(e);
                    // Tree edges only: never a leaf-pair edge.
                    let is_pair = (0..8).any(|a| {
                        (0..8).any(|b| {
                            inst.left_leaf(1, a) == edge.tail && inst.right_leaf(1, b) == edge.head
                        })
                    });
                    assert!(!is_pair);
                }
            }
        }
    }

    #[test]
    fn connectivity_matches_the_encoded_bit() {
        let mut rng = rng_from_seed(11);
        let xs: Vec<BinaryMatrix> = (0..2).map(|_| BinaryMatrix::random_non_null(2, &mut rng)).collect();
        let inst = gen_conn_lb(2 * 6 + 2, 1, &xs).unwrap();
        for i in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let fails = failure_set(&inst, i, j1, j2);
                    let connected = exact::strongly_connected(&inst.graph, &fails, None);
                    assert_eq!(connected, xs[i].get(j1, j2), "block {i} cell ({j1},{j2})");
                }
            }
        }
    }

    #[test]
    fn conn_decode_round_trips() {
        let mut rng = rng_from_seed(13);
        let xs: Vec<BinaryMatrix> = (0..2).map(|_| BinaryMatrix::random_non_null(4, &mut rng)).collect();
        let inst = gen_conn_lb(2 * 14, 2, &xs).unwrap();
        let decoded = decode_conn_lb(&inst, |fails| {
            exact::strongly_connected(&inst.graph, fails, None)
        });
        assert_eq!(decoded, xs);
    }
}
