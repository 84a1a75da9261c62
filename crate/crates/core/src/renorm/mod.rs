//! Multi-scale renormalization: dominance, cluster statistics, collapse and the coarsening loop.

mod generator;
mod stats;
mod tree;

use std::fmt;

use crate::graph::{reachable, sccs};
use crate::mag::{Mag, Scale};
use crate::network::SplitGraph;

pub use generator::renormalized_generator;
pub use stats::{cluster_stats, collapse, ClusterStats, WeightedStats};
pub use tree::{renormalize, CoalescenceTree, MergeStep, TreeNode};

/// How cluster statistics are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Integer scale arithmetic with max/min formulas.
    Scale,
    /// Stationary-measure averages of the internal chain.
    Weighted,
}

/// How resonant clusters are classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonanceBranch {
    AssumeAutocatalytic,
    AssumeFree,
}

/// Renormalization settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenormOptions {
    pub mode: Mode,
    /// Two scales have the same order when they differ by at most `tol`.
    pub tol: i64,
    pub resonance_branch: ResonanceBranch,
}

impl Default for RenormOptions {
    fn default() -> RenormOptions {
        RenormOptions { mode: Mode::Scale, tol: 0, resonance_branch: ResonanceBranch::AssumeAutocatalytic }
    }
}

/// Regime of a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Leakage dominates the deficiency weight.
    Free,
    /// Deficiency weight dominates leakage.
    Autocatalytic,
    /// External `alpha` dominates both (only for `alpha`-dependent queries).
    Degraded,
    /// Deficiency weight and leakage have the same order.
    Resonance,
    /// No outgoing edge, degradation or deficiency.
    Closed,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Free => "free",
            Regime::Autocatalytic => "autocatalytic",
            Regime::Degraded => "degraded",
            Regime::Resonance => "resonance",
            Regime::Closed => "closed",
        };
        f.write_str(s)
    }
}

/// Scale of the largest outgoing rate of `v`, edges and degradation (`n_out`).
pub fn out_scale(g: &SplitGraph, v: usize) -> Scale {
    g.edges_from(v).map(|(_, m)| m.scale()).chain([g.beta(v).scale()]).max().flatten()
}

/// Vertex scale used for dominance: edges, deficiency and degradation.
pub fn vertex_scale(g: &SplitGraph, v: usize) -> Scale {
    out_scale(g, v).max(g.kappa(v).scale())
}

/// Dominant successor lists: `v -> v'` is dominant iff `n_e >= n_v - tol` and, when
/// `alpha` is finite, `n_e >= n_alpha`.
pub fn dominant_subgraph(g: &SplitGraph, alpha: Scale, tol: i64) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|v| {
            let nv = vertex_scale(g, v);
            g.edges_from(v)
                .filter(|(_, m)| {
                    let ne = m.scale();
                    ne >= nv.map(|x| x - tol) && (alpha.is_none() || ne >= alpha)
                })
                .map(|(t, _)| t)
                .collect()
        })
        .collect()
}

/// Whether degradation is dominant at `v`.
pub fn degradation_dominant(g: &SplitGraph, v: usize, tol: i64) -> bool {
    let nb = g.beta(v).scale();
    nb.is_some() && nb >= vertex_scale(g, v).map(|x| x - tol)
}

/// Whether the deficiency of `v` strictly dominates its outgoing rates (a stopped vertex).
pub fn deficiency_stopped(g: &SplitGraph, v: usize, tol: i64) -> bool {
    match (g.kappa(v).scale(), out_scale(g, v)) {
        (Some(k), Some(o)) => k > o + tol,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Infra-red cut-off `G_{>=n}` with the kept vertices (original indices).
#[derive(Debug, Clone, PartialEq)]
pub struct CutOff {
    pub graph: SplitGraph,
    pub vertices: Vec<usize>,
}

/// Keeps edges, deficiencies and degradations of scale `>= n`, the vertices with `n_v >= n`
/// and the targets of kept edges.
pub fn cutoff(g: &SplitGraph, n: Scale) -> CutOff {
    let mut keep: Vec<bool> = (0..g.n()).map(|v| vertex_scale(g, v) >= n).collect();
    for (s, t, r) in g.edges() {
        if keep[s] && r.scale() >= n {
            keep[t] = true;
        }
    }
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
    let pos = |v: usize| vertices.binary_search(&v).ok();
    let names = vertices.iter().map(|&v| g.name(v).to_string()).collect();
    let mut h = SplitGraph::new(g.base(), names);
    for (i, &v) in vertices.iter().enumerate() {
        for (t, r) in g.edges_from(v) {
            if let Some(j) = pos(t) {
                if r.scale() >= n {
                    h.add_edge(i, j, r);
                }
            }
        }
        if g.kappa(v).scale() >= n {
            h.add_kappa(i, g.kappa(v));
        }
        if g.beta(v).scale() >= n {
            h.add_beta(i, g.beta(v));
        }
    }
    CutOff { graph: h, vertices }
}

/// Truncation at scale `n` preserving the diagonal: edges below `n` become degradation and
/// deficiencies below `n` are dropped, so the Lyapunov eigenvalue is nondecreasing as `n`
/// decreases.
pub fn truncate(g: &SplitGraph, n: Scale) -> SplitGraph {
    let mut h = SplitGraph::new(g.base(), g.names().to_vec());
    for v in 0..g.n() {
        for (t, r) in g.edges_from(v) {
            if r.scale() >= n {
                h.add_edge(v, t, r);
            } else {
                h.add_beta(v, r);
            }
        }
        if g.kappa(v).scale() >= n {
            h.add_kappa(v, g.kappa(v));
        }
        h.add_beta(v, g.beta(v));
    }
    h
}

/// Non-trivial strongly connected components of the dominant subgraph with no dominant
/// edge leaving them, in order of their lowest vertex.
pub fn maximal_dominant_sccs(g: &SplitGraph, tol: i64) -> Vec<Vec<usize>> {
    let dom = dominant_subgraph(g, None, tol);
    let mut out: Vec<Vec<usize>> = sccs(&dom)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .filter(|c| c.iter().all(|&v| dom[v].iter().all(|t| c.contains(t))))
        .collect();
    out.sort();
    out
}

/// Lowest scale among dominant edges internal to `cluster`.
pub fn internal_min_scale(g: &SplitGraph, cluster: &[usize], tol: i64) -> Scale {
    let dom = dominant_subgraph(g, None, tol);
    cluster
        .iter()
        .flat_map(|&v| dom[v].iter().filter(|t| cluster.contains(t)).map(move |&t| g.edge(v, t).scale()))
        .min()
        .flatten()
}

/// Vertices reachable from `sigma0`.
pub fn accessible(g: &SplitGraph, sigma0: usize) -> Vec<usize> {
    let seen = reachable(&g.successors(), &[sigma0]);
    (0..g.n()).filter(|&v| seen[v]).collect()
}

/// `b^n` as a magnitude.
pub(crate) fn mag_of(scale: Scale, base: f64) -> Mag {
    Mag::from_scale(scale, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_edges_are_dominant() {
        let mut g = SplitGraph::new(10.0, vec!["a".into(), "b".into(), "c".into()]);
        g.add_edge(0, 1, Mag::from_scale(Some(-3), 10.0));
        g.add_edge(1, 2, Mag::from_scale(Some(-8), 10.0));
        assert_eq!(dominant_subgraph(&g, None, 0), vec![vec![1], vec![2], vec![]]);
        assert!(maximal_dominant_sccs(&g, 0).is_empty());
    }

    #[test]
    fn tolerance_band_keeps_near_ties() {
        let mut g = SplitGraph::new(10.0, vec!["a".into(), "b".into(), "c".into()]);
        g.add_edge(0, 1, Mag::from_scale(Some(-3), 10.0));
        g.add_edge(0, 2, Mag::from_scale(Some(-4), 10.0));
        assert_eq!(dominant_subgraph(&g, None, 1)[0], vec![1, 2]);
        assert_eq!(dominant_subgraph(&g, None, 0)[0], vec![1]);
    }

    #[test]
    fn example2_dominance_at_vertex_one() {
        let g = fixtures::example2_graph(5.0);
        let dom = dominant_subgraph(&g, None, 0);
        assert_eq!(dom[0], vec![1]);
    }

    #[test]
    fn example2_cutoff_at_minus_five() {
        let g = fixtures::example2_graph(10.0);
        let c = cutoff(&g, Some(-5));
        let mut scales: Vec<i64> = c.graph.edges().map(|(_, _, m)| m.scale().unwrap()).collect();
        scales.extend((0..c.graph.n()).filter_map(|v| c.graph.kappa(v).scale()));
        scales.sort();
        assert_eq!(scales, vec![-5, -3, -2, 0]);
        assert_eq!(cutoff(&g, None).graph, g);
    }

    #[test]
    fn example2_first_cluster() {
        let g = fixtures::example2_graph(5.0);
        let found = maximal_dominant_sccs(&g, 0);
        assert_eq!(found, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(internal_min_scale(&g, &[0, 1], 0), Some(-5));
        assert_eq!(internal_min_scale(&g, &[2, 3], 0), Some(-6));
    }

    #[test]
    fn disjoint_cycles_are_both_found() {
        let mut g = SplitGraph::new(10.0, (0..4).map(|i| i.to_string()).collect());
        for (s, t) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            g.add_edge(s, t, Mag::from_scale(Some(0), 10.0));
        }
        assert_eq!(maximal_dominant_sccs(&g, 0), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn truncation_keeps_the_diagonal() {
        let g = fixtures::example2_graph(10.0);
        let t = truncate(&g, Some(-5));
        for v in 0..g.n() {
            let kept_kappa = if g.kappa(v).scale() >= Some(-5) { g.kappa(v).value() } else { 0.0 };
            let want = g.abs_diag(v) + g.kappa(v).value() - kept_kappa;
            assert!((t.abs_diag(v) - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }
}
