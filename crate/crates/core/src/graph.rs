//! Structural graph helpers over adjacency lists.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// Strongly connected components in topological order (sources first), members sorted.
pub fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(succ.len(), 0);
    let nodes: Vec<_> = (0..succ.len()).map(|_| g.add_node(())).collect();
    for (s, ts) in succ.iter().enumerate() {
        for &t in ts {
            g.add_edge(nodes[s], nodes[t], ());
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut m: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            m.sort_unstable();
            m
        })
        .collect();
    comps.reverse();
    comps
}

/// Vertices reachable from any of `starts` (the starts included).
pub fn reachable(succ: &[Vec<usize>], starts: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &t in &succ[v] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Reversed adjacency lists.
pub fn reverse(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); succ.len()];
    for (s, ts) in succ.iter().enumerate() {
        for &t in ts {
            pred[t].push(s);
        }
    }
    pred
}

/// Whether the graph is strongly connected (a single vertex counts as connected).
pub fn is_strongly_connected(succ: &[Vec<usize>]) -> bool {
    if succ.is_empty() {
        return false;
    }
    reachable(succ, &[0]).iter().all(|&b| b) && reachable(&reverse(succ), &[0]).iter().all(|&b| b)
}

/// Period of a strongly connected graph: gcd of `level(u) + 1 - level(v)` over edges.
pub fn period(succ: &[Vec<usize>]) -> usize {
    let n = succ.len();
    if n == 0 {
        return 1;
    }
    let mut level: Vec<Option<i64>> = vec![None; n];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &t in &succ[v] {
            if level[t].is_none() {
                level[t] = Some(level[v].unwrap() + 1);
                queue.push_back(t);
            }
        }
    }
    let mut g: i64 = 0;
    for (s, ts) in succ.iter().enumerate() {
        for &t in ts {
            if let (Some(ls), Some(lt)) = (level[s], level[t]) {
                g = gcd(g, (ls + 1 - lt).abs());
            }
        }
    }
    if g == 0 {
        1
    } else {
        g as usize
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sccs_are_topologically_sorted() {
        let succ = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        assert_eq!(sccs(&succ), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn reachability_from_middle_of_chain() {
        let succ = vec![vec![1], vec![2], vec![]];
        assert_eq!(reachable(&succ, &[1]), vec![false, true, true]);
    }

    #[test]
    fn strong_connectivity() {
        assert!(is_strongly_connected(&[vec![1], vec![0]]));
        assert!(!is_strongly_connected(&[vec![1], vec![]]));
        assert!(is_strongly_connected(&[vec![]]));
    }

    #[test]
    fn periods() {
        assert_eq!(period(&[vec![1], vec![0]]), 2);
        assert_eq!(period(&[vec![1], vec![2], vec![0]]), 3);
        assert_eq!(period(&[vec![1], vec![2], vec![0, 1]]), 1);
        assert_eq!(period(&[vec![1, 2], vec![0], vec![3], vec![0]]), 1);
    }
}
