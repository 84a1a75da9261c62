//! Hierarchical formulas: source restriction, cores, threshold scale and log-scale
//! estimates of the Lyapunov data.

mod compare;
mod dag;

use std::fmt;

use crate::error::{Error, Result};
use crate::mag::Scale;
use crate::network::SplitGraph;
use crate::renorm::{accessible, dominant_subgraph, out_scale, CoalescenceTree, Regime};

pub use compare::{compare, Comparison, Deviation};
pub use dag::{edge_depth, leading_dag, path_depth, DepthDag, Direction};

/// Vertices reachable from `sigma0`, increasing.
pub fn restrict_accessible(g: &SplitGraph, sigma0: usize) -> Result<Vec<usize>> {
    if sigma0 >= g.n() {
        return Err(Error::UnknownVertex(sigma0.to_string()));
    }
    Ok(accessible(g, sigma0))
}

/// A maximal dominant SCC of the final effective graph accessible from the source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceScc {
    /// Vertex of the final effective graph.
    pub vertex: usize,
    /// Bare species it contains.
    pub species: Vec<usize>,
    /// Threshold rate `alpha_q` (scale), `-inf` when not autocatalytic.
    pub alpha: Scale,
}

/// Source-restricted SCCs, cores and threshold scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreSet {
    pub sigma0: usize,
    /// Bare species accessible from `sigma0`.
    pub accessible: Vec<usize>,
    /// Final vertices accessible from the vertex containing `sigma0`.
    pub accessible_final: Vec<usize>,
    /// Accessible final vertices other than inert sinks (no outgoing rate of any kind).
    pub live: Vec<usize>,
    pub sccs: Vec<SourceScc>,
    /// Indices into `sccs`.
    pub cores: Vec<usize>,
    pub threshold: Scale,
    /// At least two cores tie within the order tolerance.
    pub resonant_cores: bool,
}

impl CoreSet {
    /// Final vertices of the cores.
    pub fn core_vertices(&self) -> Vec<usize> {
        self.cores.iter().map(|&c| self.sccs[c].vertex).collect()
    }
}

/// Maximal dominant SCCs accessible from `sigma0`, their threshold rates and the cores.
///
/// Inert sinks are treated as boundary vertices, as in the oracle. In the
/// non-autocatalytic case every SCC is a core and the threshold is `-inf`.
pub fn cores_and_threshold(tree: &CoalescenceTree, sigma0: usize) -> Result<CoreSet> {
    let accessible_bare = restrict_accessible(&tree.bare, sigma0)?;
    let g = &tree.graph;
    let start = tree.top_vertex(sigma0);
    let accessible_final = accessible(g, start);
    // Inert sinks are boundary vertices: edges into them count as degradation, unless
    // nothing else is accessible.
    let inert = |v: usize| g.edges_from(v).next().is_none() && g.kappa(v).is_zero() && g.beta(v).is_zero();
    let live: Vec<usize> = if accessible_final.iter().all(|&v| inert(v)) {
        accessible_final.clone()
    } else {
        accessible_final.iter().copied().filter(|&v| !inert(v)).collect()
    };
    let dom = dominant_subgraph(&g.restrict(&live), None, tree.options.tol);
    let sccs: Vec<SourceScc> = live
        .iter()
        .enumerate()
        .filter(|&(i, _)| dom[i].is_empty())
        .map(|(_, v)| v)
        .map(|&v| SourceScc {
            vertex: v,
            species: tree.nodes[tree.top[v]].species.clone(),
            alpha: tree.vertex_lambda(v),
        })
        .collect();
    let threshold = sccs.iter().map(|s| s.alpha).max().flatten();
    let tol = tree.options.tol;
    let cores: Vec<usize> = match threshold {
        None => (0..sccs.len()).collect(),
        Some(t) => (0..sccs.len()).filter(|&i| sccs[i].alpha.is_some_and(|a| a >= t - tol)).collect(),
    };
    let resonant_cores = threshold.is_some() && cores.len() >= 2;
    Ok(CoreSet { sigma0, accessible: accessible_bare, accessible_final, live, sccs, cores, threshold, resonant_cores })
}

/// Estimate of the Lyapunov eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaEstimate {
    /// `lambda* ~ b^n`.
    Growth(i64),
    /// No autocatalytic core: `lambda* <= 0`, magnitude not estimated.
    NonPositive,
}

impl LambdaEstimate {
    pub fn scale(&self) -> Scale {
        match self {
            LambdaEstimate::Growth(n) => Some(*n),
            LambdaEstimate::NonPositive => None,
        }
    }
}

impl fmt::Display for LambdaEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaEstimate::Growth(n) => write!(f, "b^{n}"),
            LambdaEstimate::NonPositive => f.write_str("non-positive"),
        }
    }
}

/// Markers attached to an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    /// A cluster met on the way was resonant (resolved by the configured branch).
    pub resonance: bool,
    /// Several cores share the threshold scale.
    pub resonant_cores: bool,
    /// Degradation dominates at some accessible final vertex.
    pub cemetery: bool,
    /// No autocatalytic core is accessible.
    pub shadow_zone: bool,
}

impl Flags {
    pub fn any_resonance(&self) -> bool {
        self.resonance || self.resonant_cores
    }
}

/// Hierarchical log-scale estimates, indexed by bare species (`None` is `-inf`).
#[derive(Debug, Clone, PartialEq)]
pub struct HierEstimate {
    pub sigma0: usize,
    pub cores: CoreSet,
    pub lambda: LambdaEstimate,
    /// External rate used in the weights: the threshold rate, or `-inf`.
    pub alpha: Scale,
    /// `log_b pi`, shifted so the maximum over core members is 0.
    pub pi_log: Vec<Scale>,
    /// `log_b v_dagger`, with core members at 0.
    pub vdagger_log: Vec<Scale>,
    /// `log_b v = log_b pi - scale(k_v + alpha)`.
    pub v_log: Vec<Scale>,
    /// Depth DAG from the cores over the final effective graph.
    pub dag: DepthDag,
    pub flags: Flags,
}

/// Hierarchical estimates of `lambda*`, `pi`, `v_dagger` and `v` for the source `sigma0`.
///
/// Core members get `pi = prod Z^-1` over their enclosing clusters. Other accessible
/// vertices get the maximal path weight `b^-D` from the cores at the threshold rate times
/// `prod Z(0, alpha)^-1` over their enclosing clusters. `v_dagger` is the maximal path
/// weight from the vertex to a core.
pub fn hier_estimates(tree: &CoalescenceTree, sigma0: usize) -> Result<HierEstimate> {
    let cores = cores_and_threshold(tree, sigma0)?;
    let g = &tree.graph;
    let alpha = cores.threshold;
    let core_vertices = cores.core_vertices();
    let forward = leading_dag(g, &core_vertices, alpha, Direction::Forward)?;
    let backward = leading_dag(g, &core_vertices, alpha, Direction::Backward)?;
    let n = tree.bare.n();
    let in_source = {
        let mut m = vec![false; n];
        for &s in &cores.accessible {
            m[s] = true;
        }
        m
    };
    let neg = |z: Scale| -z.unwrap_or(0);
    let mut pi_log: Vec<Scale> = vec![None; n];
    let mut vdagger_log: Vec<Scale> = vec![None; n];
    for s in 0..n {
        if !in_source[s] {
            continue;
        }
        let top = tree.top_vertex(s);
        let enclosing = tree.enclosing(s);
        if core_vertices.contains(&top) {
            let sum: i64 = enclosing.iter().map(|&c| neg(tree.nodes[c].stats.as_ref().unwrap().z_weight)).sum();
            pi_log[s] = Some(sum);
            vdagger_log[s] = Some(0);
        } else {
            if let Some(d) = forward.depth[top] {
                let sum: i64 =
                    enclosing.iter().map(|&c| neg(tree.nodes[c].stats.as_ref().unwrap().z0_alpha(alpha))).sum();
                pi_log[s] = Some(sum - d);
            }
            vdagger_log[s] = backward.depth[top].map(|d| -d);
        }
    }
    let shift = core_vertices
        .iter()
        .flat_map(|&v| tree.nodes[tree.top[v]].species.iter())
        .filter_map(|&s| pi_log[s])
        .max()
        .unwrap_or(0);
    for p in pi_log.iter_mut().flatten() {
        *p -= shift;
    }
    let v_log = (0..n)
        .map(|s| match (pi_log[s], out_scale(&tree.bare, s).max(alpha)) {
            (Some(p), Some(k)) => Some(p - k),
            _ => None,
        })
        .collect();
    let resonance = tree.nodes.iter().any(|node| {
        node.stats.as_ref().is_some_and(|st| st.regime == Regime::Resonance)
            && node.species.iter().all(|&s| in_source[s])
    });
    let cemetery = tree.cemetery().iter().any(|v| cores.accessible_final.contains(v));
    let flags = Flags { resonance, resonant_cores: cores.resonant_cores, cemetery, shadow_zone: alpha.is_none() };
    let lambda = match alpha {
        Some(a) => LambdaEstimate::Growth(a),
        None => LambdaEstimate::NonPositive,
    };
    Ok(HierEstimate { sigma0, cores, lambda, alpha, pi_log, vdagger_log, v_log, dag: forward, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::renorm::{renormalize, RenormOptions};

    fn tree(g: &SplitGraph) -> CoalescenceTree {
        renormalize(g, RenormOptions::default()).unwrap()
    }

    #[test]
    fn accessible_sets() {
        let g = fixtures::example1_graph(-1);
        assert_eq!(restrict_accessible(&g, 2).unwrap(), vec![2]);
        assert_eq!(restrict_accessible(&g, 0).unwrap(), vec![0, 1, 2]);
        assert!(restrict_accessible(&g, 9).is_err());
        let m = fixtures::markov_graph();
        assert_eq!(restrict_accessible(&m, 2).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn example2_single_core() {
        for b in [5.0, 10.0] {
            let t = tree(&fixtures::example2_graph(b));
            let c = cores_and_threshold(&t, 0).unwrap();
            assert_eq!(c.threshold, Some(-7));
            assert_eq!(c.cores.len(), 1);
            assert_eq!(c.sccs[c.cores[0]].species, vec![2, 3]);
            assert!(!c.resonant_cores);
        }
    }

    #[test]
    fn example2_hierarchical_formulas() {
        for b in [5.0, 10.0] {
            let t = tree(&fixtures::example2_graph(b));
            let e = hier_estimates(&t, 0).unwrap();
            assert_eq!(e.lambda, LambdaEstimate::Growth(-7));
            assert_eq!(e.pi_log, vec![Some(-12), Some(-12), Some(0), Some(0)]);
            assert_eq!(e.vdagger_log, vec![Some(-10), Some(-10), Some(0), Some(0)]);
            let v: Vec<i64> = e.v_log.iter().map(|x| x.unwrap()).collect();
            let top = *v.iter().max().unwrap();
            assert_eq!(v.iter().map(|x| x - top).collect::<Vec<_>>(), vec![-18, -13, -4, 0]);
        }
    }

    #[test]
    fn example2_depth_of_the_coupling_edge() {
        let t = tree(&fixtures::example2_graph(5.0));
        let g1 = t.top_vertex(0);
        let g2 = t.top_vertex(2);
        assert_eq!(path_depth(&t.graph, &[g2, g1], Some(-7)).unwrap(), 13);
        let dag = leading_dag(&t.graph, &[g2], Some(-7), Direction::Forward).unwrap();
        assert_eq!(dag.depth[g1], Some(13));
        assert_eq!(dag.edges, vec![(g2, g1, 13)]);
    }

    #[test]
    fn example1_weights_relative_to_core() {
        let t = tree(&fixtures::example1_graph(-1));
        let e = hier_estimates(&t, 0).unwrap();
        assert_eq!(e.lambda, LambdaEstimate::Growth(-3));
        assert_eq!(e.pi_log, vec![Some(0), Some(0), Some(-3)]);
        assert_eq!(e.vdagger_log[2], None);
    }

    #[test]
    fn example1_below_the_wall_is_non_autocatalytic() {
        let t = tree(&fixtures::example1_graph(-4));
        let e = hier_estimates(&t, 0).unwrap();
        assert_eq!(e.lambda, LambdaEstimate::NonPositive);
        assert!(e.flags.shadow_zone);
        assert_eq!(e.cores.sccs.len(), 1);
        assert_eq!(e.cores.sccs[0].species, vec![0, 1]);
        assert_eq!(e.pi_log[0], Some(0));
        assert!(e.pi_log[2].is_some());
    }

    #[test]
    fn twin_cores_are_resonant() {
        let mut g = fixtures::example2_graph(10.0);
        // Raise the deficiency of 1 so that G1 also grows at b^-7.
        g.add_kappa(0, crate::mag::Mag::from_scale(Some(-2), 10.0));
        let t = tree(&g);
        let c = cores_and_threshold(&t, 0).unwrap();
        assert_eq!(c.threshold, Some(-7));
        assert!(c.resonant_cores, "{c:?}");
    }

    #[test]
    fn markov_support_is_everything() {
        let t = tree(&fixtures::markov_graph());
        let e = hier_estimates(&t, 0).unwrap();
        assert_eq!(e.lambda, LambdaEstimate::NonPositive);
        assert!(e.pi_log.iter().all(|p| p.is_some()));
        assert_eq!(e.pi_log.iter().flatten().max(), Some(&0));
    }
}
