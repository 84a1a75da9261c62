//! Edge depths and the leading depth DAG of an effective graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::mag::Scale;
use crate::network::SplitGraph;
use crate::renorm::out_scale;

/// Depth of the edge `x -> y` at external rate `alpha`:
/// `-floor(log_b w(alpha)_{x -> y}) = max(n_out(x), n_alpha) - n_{x -> y}`.
///
/// Compound vertices carry renormalized rates, so the denominator `n_out` of a cluster is
/// the scale of `Z(0) / tau` and the weight carries the prefactor `Z(0, alpha)^-1`.
pub fn edge_depth(g: &SplitGraph, x: usize, y: usize, alpha: Scale) -> Result<i64> {
    let ne = g.edge(x, y).scale();
    let Some(ne) = ne else {
        return Err(Error::MissingEdge { from: g.name(x).to_string(), to: g.name(y).to_string() });
    };
    let den = out_scale(g, x).max(alpha).expect("a vertex with an edge has a finite out scale");
    Ok(den - ne)
}

/// Total depth of a vertex path.
pub fn path_depth(g: &SplitGraph, path: &[usize], alpha: Scale) -> Result<i64> {
    path.windows(2).map(|w| edge_depth(g, w[0], w[1], alpha)).sum()
}

/// Orientation of a depth search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Paths leave the roots along edges.
    Forward,
    /// Paths enter the roots along edges (depth to reach a root).
    Backward,
}

/// Minimal-depth DAG rooted in a set of vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthDag {
    pub roots: Vec<usize>,
    pub direction: Direction,
    pub alpha: Scale,
    /// Minimal depth per vertex, `None` when unreachable.
    pub depth: Vec<Option<i64>>,
    /// Number of edges of a minimal path realizing `depth`, minimal among those.
    pub hops: Vec<Option<usize>>,
    /// Kept edges `(from, to, depth)` in graph orientation.
    pub edges: Vec<(usize, usize, i64)>,
}

impl DepthDag {
    /// Whether every kept edge satisfies `D_head = D_tail + depth` along the search direction.
    pub fn is_consistent(&self) -> bool {
        self.edges.iter().all(|&(x, y, d)| {
            let (tail, head) = match self.direction {
                Direction::Forward => (x, y),
                Direction::Backward => (y, x),
            };
            match (self.depth[tail], self.depth[head]) {
                (Some(a), Some(b)) => b == a + d,
                _ => false,
            }
        })
    }

    /// Whether the kept edges form an acyclic graph.
    pub fn is_acyclic(&self) -> bool {
        let n = self.depth.len();
        let mut succ = vec![Vec::new(); n];
        for &(x, y, _) in &self.edges {
            succ[x].push(y);
        }
        crate::graph::sccs(&succ).iter().all(|c| c.len() == 1) && self.edges.iter().all(|&(x, y, _)| x != y)
    }
}

/// Shortest-depth search from `roots` at external rate `alpha`.
///
/// Vertices are settled in lexicographic order of `(depth, hops)`; an edge is kept iff it
/// extends a minimal path of its tail to a minimal path of its head, which keeps every
/// equal-depth route with the same number of hops and makes the result acyclic.
pub fn leading_dag(g: &SplitGraph, roots: &[usize], alpha: Scale, direction: Direction) -> Result<DepthDag> {
    let n = g.n();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (x, y, _) in g.edges() {
        let d = edge_depth(g, x, y, alpha)?;
        if d < 0 {
            return Err(Error::DominantCycle { from: g.name(x).to_string(), to: g.name(y).to_string() });
        }
        match direction {
            Direction::Forward => adj[x].push((y, d)),
            Direction::Backward => adj[y].push((x, d)),
        }
    }
    let mut best: Vec<Option<(i64, usize)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &r in roots {
        if r >= n {
            return Err(Error::UnknownVertex(r.to_string()));
        }
        best[r] = Some((0, 0));
        heap.push(Reverse((0i64, 0usize, r)));
    }
    while let Some(Reverse((d, h, v))) = heap.pop() {
        if best[v] != Some((d, h)) {
            continue;
        }
        for &(t, w) in &adj[v] {
            let cand = (d + w, h + 1);
            if best[t].is_none_or(|b| cand < b) {
                best[t] = Some(cand);
                heap.push(Reverse((cand.0, cand.1, t)));
            }
        }
    }
    let mut edges = Vec::new();
    for (v, list) in adj.iter().enumerate() {
        let Some((dv, hv)) = best[v] else { continue };
        for &(t, w) in list {
            if best[t] == Some((dv + w, hv + 1)) {
                let e = match direction {
                    Direction::Forward => (v, t, w),
                    Direction::Backward => (t, v, w),
                };
                edges.push(e);
            }
        }
    }
    edges.sort_unstable();
    Ok(DepthDag {
        roots: roots.to_vec(),
        direction,
        alpha,
        depth: best.iter().map(|b| b.map(|(d, _)| d)).collect(),
        hops: best.iter().map(|b| b.map(|(_, h)| h)).collect(),
        edges,
    })
}
