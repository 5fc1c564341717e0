//! Greedy hitting-set selection over truncated path families. Shared by the
//! pivot hierarchy, the truncated-oracle extension, and the replacement-path
//! subroutines.

use crate::error::{Error, Result};

/// Pick a vertex set intersecting every input set.
///
/// Every input must hold at least `l` vertices and is truncated to its first
/// `l` (in path order) before selection. Rounds pick the vertex covering the
/// most still-uncovered sets, ties broken by smallest id, so the output is
/// deterministic. The size obeys the standard `ceil((n/l) * (ln q + 1))`
/// cover bound.
pub fn greedy_pivot_selection(paths: &[Vec<usize>], l: usize) -> Result<Vec<usize>> {
    if paths.is_empty() {
        return Ok(Vec::new());
    }
    let l = l.max(1);
    for (index, p) in paths.iter().enumerate() {
        if p.len() < l {
            return Err(Error::SetTooSmall {
                index,
                got: p.len(),
                needed: l,
            });
        }
    }
    let truncated: Vec<&[usize]> = paths.iter().map(|p| &p[..l]).collect();
    let top = truncated
        .iter()
        .flat_map(|p| p.iter())
        .max()
        .copied()
        .unwrap_or(0);

    let mut covered = vec![false; truncated.len()];
    let mut count = vec![0usize; top + 1];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (i, p) in truncated.iter().enumerate() {
        for &v in *p {
            count[v] += 1;
            members[v].push(i);
        }
    }

    let mut picked = Vec::new();
    let mut remaining = truncated.len();
    while remaining > 0 {
        let best = (0..count.len())
            .max_by_key(|&v| (count[v], std::cmp::Reverse(v)))
            .unwrap();
        debug_assert!(count[best] > 0);
        picked.push(best);
        for &i in &members[best] {
            if covered[i] {
                continue;
            }
            covered[i] = true;
            remaining -= 1;
            for &v in truncated[i] {
                count[v] -= 1;
            }
        }
    }
    picked.sort_unstable();
    Ok(picked)
}

/// The classic greedy cover bound `ceil((n/l) * (ln q + 1))`.
pub fn greedy_size_bound(n: usize, l: usize, q: usize) -> usize {
    if q == 0 {
        return 0;
    }
    let raw = (n as f64 / l as f64) * ((q as f64).ln() + 1.0);
    raw.ceil() as usize
}

pub fn covers_all(paths: &[Vec<usize>], l: usize, chosen: &[usize]) -> bool {
    paths
        .iter()
        .all(|p| p[..l.min(p.len())].iter().any(|v| chosen.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_family_yields_empty_set() {
        assert!(greedy_pivot_selection(&[], 3).unwrap().is_empty());
    }

    #[test]
    fn shared_vertex_wins() {
        let paths = vec![vec![0, 1, 2], vec![2, 3, 4]];
        assert_eq!(greedy_pivot_selection(&paths, 3).unwrap(), vec![2]);
    }

    #[test]
    fn disjoint_sets_force_one_pick_each() {
        let paths = vec![vec![0, 1], vec![2, 3]];
        let picked = greedy_pivot_selection(&paths, 2).unwrap();
        assert_eq!(picked.len(), 2);
        assert!(covers_all(&paths, 2, &picked));
    }

    #[test]
    fn undersized_set_is_rejected() {
        let err = greedy_pivot_selection(&[vec![0, 1], vec![7]], 2).unwrap_err();
        match err {
            Error::SetTooSmall { index, got, needed } => {
                assert_eq!((index, got, needed), (1, 1, 2));
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn truncation_uses_path_prefix() {
        // With l = 1 only the first vertices matter, so both firsts get picked.
        let paths = vec![vec![5, 0], vec![6, 0]];
        assert_eq!(greedy_pivot_selection(&paths, 1).unwrap(), vec![5, 6]);
    }

    #[test]
    fn ties_break_to_smaller_id() {
        let paths = vec![vec![4, 9], vec![9, 4]];
        // 4 and 9 both cover both truncated sets {4,9} and {9,4}; 4 wins.
        assert_eq!(greedy_pivot_selection(&paths, 2).unwrap(), vec![4]);
    }
}
