//! Directed graph with positive integer weights, stable edge ids, and the
//! text file format used by the CLI.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
}

/// Immutable directed graph. Edge ids are assigned in input order and stay
/// fixed for the lifetime of the object; failure sets are sets of edge ids.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
    max_weight: u64,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl Graph {
    pub fn new(n: usize, directed: bool, edge_list: Vec<(usize, usize, u64)>) -> Result<Graph> {
        let mut g = Graph {
            n,
            edges: Vec::with_capacity(edge_list.len()),
            directed,
            max_weight: 1,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        for (tail, head, weight) in edge_list {
            g.push_edge(tail, head, weight, None)?;
        }
        Ok(g)
    }

    fn push_edge(
        &mut self,
        tail: usize,
        head: usize,
        weight: u64,
        line: Option<usize>,
    ) -> Result<()> {
        let fail = |msg: String| match line {
            Some(line) => Error::Parse { line, msg },
            None => Error::InvalidParameter(msg),
        };
        if tail >= self.n || head >= self.n {
            return Err(fail(format!(
                "vertex id out of range in edge {tail} -> {head} (n = {})",
                self.n
            )));
        }
        if tail == head {
            return Err(fail(format!("self-loop at vertex {tail}")));
        }
        if weight < 1 {
            return Err(fail(format!("weight below 1 on edge {tail} -> {head}")));
        }
        let key = if self.directed || tail < head {
            (tail, head)
        } else {
            (head, tail)
        };
        if self.index.contains_key(&key) {
            return Err(fail(format!("duplicate edge {tail} -> {head}")));
        }
        let id = self.edges.len();
        self.index.insert(key, id);
        self.edges.push(Edge { tail, head, weight });
        self.out_adj[tail].push(id);
        self.in_adj[head].push(id);
        if !self.directed {
            self.out_adj[head].push(id);
            self.in_adj[tail].push(id);
        }
        self.max_weight = self.max_weight.max(weight);
        Ok(())
    }

    /// Parse the text format: header `n m directed`, then `m` lines `u v w`.
    /// Lines starting with `#` and blank lines are skipped. Every content
    /// line must consist of exactly its expected tokens.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut content = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = content
            .next()
            .ok_or_else(|| Error::Parse { line: 0, msg: "empty input".into() })?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("header needs `n m directed`, got {} tokens", tokens.len()),
            });
        }
        let n: usize = tokens[0]
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad vertex count: {}", tokens[0]) })?;
        let m: usize = tokens[1]
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad edge count: {}", tokens[1]) })?;
        let directed = match tokens[2] {
            "directed" => true,
            "undirected" => false,
            other => {
                return Err(Error::Parse { line, msg: format!("bad orientation flag: {other}") })
            }
        };

        let mut g = Graph {
            n,
            edges: Vec::with_capacity(m),
            directed,
            max_weight: 1,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        for _ in 0..m {
            let (line, raw) = content
                .next()
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("expected {m} edge lines") })?;
            let tok: Vec<&str> = raw.split_whitespace().collect();
            if tok.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: format!("edge line needs `u v w`, got {} tokens", tok.len()),
                });
            }
            let parse_num = |t: &str| -> Result<u64> {
                t.parse()
                    .map_err(|_| Error::Parse { line, msg: format!("bad number: {t}") })
            };
            let u = parse_num(tok[0])? as usize;
            let v = parse_num(tok[1])? as usize;
            let w = parse_num(tok[2])?;
            g.push_edge(u, v, w, Some(line))?;
        }
        if let Some((line, _)) = content.next() {
            return Err(Error::Parse { line, msg: "trailing content after edge list".into() });
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let flag = if self.directed { "directed" } else { "undirected" };
        writeln!(out, "{} {} {}", self.n, self.edges.len(), flag).unwrap();
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.tail, e.head, e.weight).unwrap();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Largest edge weight (1 for an edgeless graph).
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn is_unweighted(&self) -> bool {
        self.max_weight == 1
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn edge_between(&self, tail: usize, head: usize) -> Option<usize> {
        let key = if self.directed || tail < head {
            (tail, head)
        } else {
            (head, tail)
        };
        self.index.get(&key).copied()
    }

    /// The endpoint of `edge` reached when leaving vertex `v` across it.
    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let e = &self.edges[edge];
        if e.tail == v {
            e.head
        } else {
            e.tail
        }
    }
}

/// A simple path: ordered vertices plus its total weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub length: u64,
}

impl Path {
    /// Edge ids along the path; panics if consecutive vertices are not
    /// adjacent in `g`.
    pub fn edge_ids(&self, g: &Graph) -> Vec<usize> {
        self.vertices
            .windows(2)
            .map(|w| g.edge_between(w[0], w[1]).expect("path uses a non-edge"))
            .collect()
    }

    /// Check simplicity, adjacency, edge avoidance, and the length sum.
    pub fn validate(&self, g: &Graph, banned: &[usize]) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; g.n()];
        for &v in &self.vertices {
            if v >= g.n() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        let mut total = 0u64;
        for w in self.vertices.windows(2) {
            match g.edge_between(w[0], w[1]) {
                Some(e) if g.edge(e).tail == w[0] || !g.is_directed() => {
                    if banned.contains(&e) {
                        return false;
                    }
                    total += g.edge(e).weight;
                }
                _ => return false,
            }
        }
        total == self.length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_graph() {
        let g = Graph::parse("3 2 directed\n0 1 1\n1 2 1").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.max_weight(), 1);
        assert_eq!(g.edge_between(0, 1), Some(0));
        assert_eq!(g.edge_between(1, 0), None);
    }

    #[test]
    fn records_weight_bound() {
        let g = Graph::parse("3 3 directed\n0 1 2\n1 2 2\n2 0 2").unwrap();
        assert_eq!(g.max_weight(), 2);
    }

    #[test]
    fn rejects_zero_weight_with_line() {
        let err = Graph::parse("2 1 directed\n0 1 0").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("weight below 1"));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_duplicates_self_loops_and_bad_ids() {
        assert!(Graph::parse("2 2 directed\n0 1 1\n0 1 2").is_err());
        assert!(Graph::parse("2 1 directed\n0 0 1").is_err());
        assert!(Graph::parse("2 1 directed\n0 2 1").is_err());
    }

    #[test]
    fn rejects_trailing_tokens_and_lines() {
        assert!(Graph::parse("2 1 directed\n0 1 1 9").is_err());
        assert!(Graph::parse("2 1 directed extra\n0 1 1").is_err());
        assert!(Graph::parse("2 1 directed\n0 1 1\n0 1 1").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = Graph::parse("# header\n\n2 1 directed\n# edge\n0 1 1\n").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::parse("3 2 directed\n0 1 3\n2 0 1").unwrap();
        let again = Graph::parse(&g.to_text()).unwrap();
        assert_eq!(again.m(), 2);
        assert_eq!(again.edge(1).tail, 2);
    }
}
