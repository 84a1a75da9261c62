//! The coarsening loop and the coalescence tree it produces.

use std::fmt::Write as _;

use crate::error::Result;
use crate::mag::{fmt_scale, Scale};
use crate::network::SplitGraph;

use super::{
    cluster_stats, collapse, deficiency_stopped, degradation_dominant, internal_min_scale, maximal_dominant_sccs,
    out_scale, ClusterStats, Regime, RenormOptions,
};

/// A bare species or a compound cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub name: String,
    /// Bare species contained in the node, increasing.
    pub species: Vec<usize>,
    /// Child nodes merged into this one (empty for bare species).
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Merge step (1-based) that created the node.
    pub step: Option<usize>,
    /// Statistics for compound nodes.
    pub stats: Option<ClusterStats>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// One renormalization step.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    /// 1-based step index `i`.
    pub index: usize,
    /// Cut-off scale `n(i)`.
    pub cutoff: i64,
    /// Nodes created at this step.
    pub clusters: Vec<usize>,
    /// Bare edges `(from, to)` of the cut graph `G_cut(i)` (scale `>= n(i)`).
    pub cut_edges: Vec<(usize, usize)>,
}

/// Nested merging structure of a renormalization run.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescenceTree {
    pub options: RenormOptions,
    /// The bare split graph.
    pub bare: SplitGraph,
    /// Nodes; the first `bare.n()` are the bare species in order.
    pub nodes: Vec<TreeNode>,
    pub steps: Vec<MergeStep>,
    /// Final effective graph.
    pub graph: SplitGraph,
    /// Tree node of each vertex of the final effective graph.
    pub top: Vec<usize>,
}

impl CoalescenceTree {
    /// Vertex of the final effective graph containing a bare species.
    pub fn top_vertex(&self, species: usize) -> usize {
        let mut node = species;
        while let Some(p) = self.nodes[node].parent {
            node = p;
        }
        self.top.iter().position(|&t| t == node).expect("roots are final vertices")
    }

    /// Compound nodes enclosing a species, innermost first.
    pub fn enclosing(&self, species: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut node = species;
        while let Some(p) = self.nodes[node].parent {
            out.push(p);
            node = p;
        }
        out
    }

    /// Whether a final vertex is stopped by a dominant deficiency (autocatalytic terminal).
    pub fn is_stopped(&self, vertex: usize) -> bool {
        match &self.nodes[self.top[vertex]].stats {
            Some(s) => s.autocatalytic,
            None => deficiency_stopped(&self.graph, vertex, self.options.tol),
        }
    }

    /// Growth-rate scale of a final vertex: `lambda_G` for autocatalytic clusters, the
    /// deficiency scale for stopped bare species, `-inf` otherwise.
    pub fn vertex_lambda(&self, vertex: usize) -> Scale {
        match &self.nodes[self.top[vertex]].stats {
            Some(s) => s.lambda,
            None if deficiency_stopped(&self.graph, vertex, self.options.tol) => self.graph.kappa(vertex).scale(),
            None => None,
        }
    }

    /// Whether any cluster is resonant.
    pub fn has_resonance(&self) -> bool {
        self.nodes.iter().any(|n| n.stats.as_ref().is_some_and(|s| s.regime == Regime::Resonance))
    }

    /// Final vertices whose degradation is dominant (absorption into the cemetery).
    pub fn cemetery(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| degradation_dominant(&self.graph, v, self.options.tol)).collect()
    }

    /// Deterministic plain-text dump, one node per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let names = |ids: &[usize]| -> String {
            if ids.is_empty() {
                "-".to_string()
            } else {
                ids.iter().map(|&i| self.nodes[i].name.as_str()).collect::<Vec<_>>().join(",")
            }
        };
        let bare_names = |ids: &[usize]| ids.iter().map(|&i| self.bare.name(i)).collect::<Vec<_>>().join(",");
        for (id, node) in self.nodes.iter().enumerate() {
            let parent = node.parent.map_or("-".to_string(), |p| self.nodes[p].name.clone());
            match &node.stats {
                None => {
                    let v = id;
                    let n_out = out_scale(&self.bare, v);
                    let eps = match (self.bare.kappa(v).scale(), n_out) {
                        (Some(k), Some(o)) => Some(k - o),
                        _ => None,
                    };
                    let _ = writeln!(
                        out,
                        "node {id} name={} kind=species members={} parent={parent} n_out={} eps={}",
                        node.name,
                        node.name,
                        fmt_scale(n_out),
                        fmt_scale(eps),
                    );
                }
                Some(s) => {
                    let cutoff = node.step.map(|i| self.steps[i - 1].cutoff);
                    let _ = writeln!(
                        out,
                        "node {id} name={} kind=cluster members={} children={} parent={parent} step={} cutoff={} \
                         tau_inv={} eps_bar={} z0={} z={} regime={} autocatalytic={} lambda={}",
                        node.name,
                        bare_names(&node.species),
                        names(&node.children),
                        node.step.map_or("-".to_string(), |i| i.to_string()),
                        fmt_scale(cutoff),
                        fmt_scale(s.tau_inv),
                        fmt_scale(s.eps_bar),
                        fmt_scale(s.z0),
                        fmt_scale(s.z_weight),
                        s.regime,
                        s.autocatalytic,
                        fmt_scale(s.lambda),
                    );
                }
            }
        }
        let finals: Vec<String> = self.top.iter().map(|&t| self.nodes[t].name.clone()).collect();
        let _ = writeln!(out, "final {}", finals.join(" "));
        let stopped: Vec<String> =
            (0..self.graph.n()).filter(|&v| self.is_stopped(v)).map(|v| self.graph.name(v).to_string()).collect();
        let _ = writeln!(out, "stopped {}", if stopped.is_empty() { "-".to_string() } else { stopped.join(" ") });
        let cem: Vec<String> = self.cemetery().into_iter().map(|v| self.graph.name(v).to_string()).collect();
        let _ = writeln!(out, "cemetery {}", if cem.is_empty() { "-".to_string() } else { cem.join(" ") });
        out
    }
}

/// Runs the coarsening loop on a split graph.
///
/// Each step collapses every non-trivial maximal dominant SCC of the current effective
/// graph whose internal minimum scale is the highest among them; that scale is the step's
/// cut-off. The loop stops when no such SCC remains.
pub fn renormalize(bare: &SplitGraph, options: RenormOptions) -> Result<CoalescenceTree> {
    let n = bare.n();
    let mut nodes: Vec<TreeNode> = (0..n)
        .map(|v| TreeNode {
            name: bare.name(v).to_string(),
            species: vec![v],
            children: Vec::new(),
            parent: None,
            step: None,
            stats: None,
        })
        .collect();
    let mut graph = bare.clone();
    let mut top: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    let mut compound = 0usize;
    loop {
        let found = maximal_dominant_sccs(&graph, options.tol);
        let scored: Vec<(Vec<usize>, i64)> = found
            .into_iter()
            .map(|c| {
                let s = internal_min_scale(&graph, &c, options.tol).expect("dominant SCCs have internal edges");
                (c, s)
            })
            .collect();
        let Some(cutoff) = scored.iter().map(|(_, s)| *s).max() else {
            break;
        };
        let chosen: Vec<Vec<usize>> = scored.into_iter().filter(|(_, s)| *s == cutoff).map(|(c, _)| c).collect();
        let index = steps.len() + 1;
        let stats: Vec<ClusterStats> =
            chosen.iter().map(|c| cluster_stats(&graph, c, &options)).collect::<Result<_>>()?;
        let names: Vec<String> = (1..=chosen.len()).map(|k| format!("G{}", compound + k)).collect();
        compound += chosen.len();
        let (next, map) = collapse(&graph, &stats, &names);
        let mut new_top = vec![usize::MAX; next.n()];
        for (old, &new) in map.iter().enumerate() {
            if !chosen.iter().any(|c| c.contains(&old)) {
                new_top[new] = top[old];
            }
        }
        let mut created = Vec::new();
        for (c, (s, name)) in chosen.iter().zip(stats.into_iter().zip(names)) {
            let id = nodes.len();
            let children: Vec<usize> = c.iter().map(|&v| top[v]).collect();
            let mut species: Vec<usize> = children.iter().flat_map(|&ch| nodes[ch].species.clone()).collect();
            species.sort_unstable();
            for &ch in &children {
                nodes[ch].parent = Some(id);
            }
            new_top[map[c[0]]] = id;
            nodes.push(TreeNode { name, species, children, parent: None, step: Some(index), stats: Some(s) });
            created.push(id);
        }
        let cut_edges = bare.edges().filter(|(_, _, r)| r.scale() >= Some(cutoff)).map(|(s, t, _)| (s, t)).collect();
        steps.push(MergeStep { index, cutoff, clusters: created, cut_edges });
        graph = next;
        top = new_top;
    }
    Ok(CoalescenceTree { options, bare: bare.clone(), nodes, steps, graph, top })
}
