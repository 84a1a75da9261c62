//! Cluster statistics and the collapse of clusters into compound vertices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mag::{add, Mag, Scale};
use crate::network::{scale_of, SplitGraph, WeightFlavor};
use crate::oracle::stationary;

use super::{internal_min_scale, mag_of, out_scale, Mode, Regime, RenormOptions, ResonanceBranch};

/// Real-valued quantities of a cluster in weighted mode.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStats {
    /// Stationary measure of the internal chain, in member order.
    pub pi_tilde: Vec<f64>,
    pub tau: f64,
    pub eps_bar: f64,
    pub z0: f64,
    /// `(eps_bar - Z(0)) / tau`.
    pub lambda1: f64,
}

/// Statistics of one cluster and its renormalized rates.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    /// Members as vertex indices of the graph the cluster was found in.
    pub members: Vec<usize>,
    pub mode: Mode,
    pub tol: i64,
    /// Characteristic rate `1/tau` (scale).
    pub tau_inv: Scale,
    /// Bare deficiency weight `eps_bar` (scale).
    pub eps_bar: Scale,
    /// Renormalization factor `Z(0)` (scale, `-inf` for a cluster without exits).
    pub z0: Scale,
    /// External rate `Z(0) / tau` (scale).
    pub k_ext: Scale,
    /// Cluster Lyapunov exponent `eps_bar / tau` when autocatalytic, `-inf` otherwise.
    pub lambda: Scale,
    /// `Z = max(Z(0), eps_bar)` (scale).
    pub z_weight: Scale,
    pub regime: Regime,
    /// Classification after resolving resonance.
    pub autocatalytic: bool,
    pub weighted: Option<WeightedStats>,
    /// Renormalized outgoing rates `k_{G -> v'}` keyed by target vertex.
    pub out_rates: BTreeMap<usize, Mag>,
    /// Renormalized deficiency rate `kappa_G`.
    pub kappa: Mag,
    /// Renormalized degradation rate `beta_G`.
    pub beta: Mag,
}

impl ClusterStats {
    /// `Z(0, alpha) = max(Z(0), alpha tau)` (scale).
    pub fn z0_alpha(&self, alpha: Scale) -> Scale {
        let a = match (alpha, self.tau_inv) {
            (Some(a), Some(t)) => Some(a - t),
            _ => None,
        };
        self.z0.max(a)
    }

    /// Regime at external rate `alpha`: degraded once `alpha tau` dominates `Z`.
    pub fn regime_at(&self, alpha: Scale) -> Regime {
        match (alpha, self.tau_inv) {
            (Some(a), Some(t)) if Some(a - t) > self.z_weight.map(|z| z + self.tol) => Regime::Degraded,
            _ => self.regime,
        }
    }

    /// Whether the cluster had no exit at all.
    pub fn is_closed(&self) -> bool {
        self.regime == Regime::Closed
    }
}

fn classify(eps_bar: Scale, z0: Scale, opts: &RenormOptions) -> (Regime, bool) {
    match (eps_bar, z0) {
        (None, None) => (Regime::Closed, false),
        (Some(e), Some(z)) if (e - z).abs() <= opts.tol => {
            (Regime::Resonance, opts.resonance_branch == ResonanceBranch::AssumeAutocatalytic)
        }
        (e, z) if e > z.map(|z| z + opts.tol) || (e.is_some() && z.is_none()) => (Regime::Autocatalytic, true),
        _ => (Regime::Free, false),
    }
}

/// Statistics of `cluster` (a maximal dominant SCC of `g`).
pub fn cluster_stats(g: &SplitGraph, cluster: &[usize], opts: &RenormOptions) -> Result<ClusterStats> {
    if cluster.len() < 2 {
        return Err(Error::Precondition("a cluster has at least two vertices".into()));
    }
    match opts.mode {
        Mode::Scale => scale_stats(g, cluster, opts),
        Mode::Weighted => weighted_stats(g, cluster, opts),
    }
}

fn scale_stats(g: &SplitGraph, cluster: &[usize], opts: &RenormOptions) -> Result<ClusterStats> {
    let base = g.base();
    let tau_inv = internal_min_scale(g, cluster, opts.tol);
    if tau_inv.is_none() {
        return Err(Error::Precondition("cluster has no internal dominant edge".into()));
    }
    let mut eps_bar: Scale = None;
    let mut z0: Scale = None;
    let mut out_best: BTreeMap<usize, i64> = BTreeMap::new();
    let mut beta_best: Scale = None;
    for &v in cluster {
        let n_out = out_scale(g, v).expect("cluster members have internal edges");
        eps_bar = eps_bar.max(g.kappa(v).scale().map(|k| k - n_out));
        let b = g.beta(v).scale().map(|x| x - n_out);
        beta_best = beta_best.max(b);
        z0 = z0.max(b);
        for (t, r) in g.edges_from(v) {
            if cluster.contains(&t) {
                continue;
            }
            let rel = r.scale().unwrap() - n_out;
            z0 = z0.max(Some(rel));
            let e = out_best.entry(t).or_insert(rel);
            *e = (*e).max(rel);
        }
    }
    let (regime, autocatalytic) = classify(eps_bar, z0, opts);
    let lambda = if autocatalytic { add(eps_bar, tau_inv) } else { None };
    let out_rates = out_best.into_iter().map(|(t, rel)| (t, mag_of(add(Some(rel), tau_inv), base))).collect();
    Ok(ClusterStats {
        members: cluster.to_vec(),
        mode: Mode::Scale,
        tol: opts.tol,
        tau_inv,
        eps_bar,
        z0,
        k_ext: add(z0, tau_inv),
        lambda,
        z_weight: z0.max(eps_bar),
        regime,
        autocatalytic,
        weighted: None,
        out_rates,
        kappa: mag_of(add(eps_bar, tau_inv), base),
        beta: mag_of(add(beta_best, tau_inv), base),
    })
}

fn weighted_stats(g: &SplitGraph, cluster: &[usize], opts: &RenormOptions) -> Result<ClusterStats> {
    let base = g.base();
    let inner = g.restrict(cluster);
    let pi = stationary(&inner.weights(0.0, WeightFlavor::Markov)?)?;
    let k: Vec<f64> = cluster.iter().map(|&v| g.k_out(v) + g.beta(v).value()).collect();
    let mut tau = 0.0;
    let mut eps = 0.0;
    let mut z0 = 0.0;
    let mut beta = 0.0;
    let mut out: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, &v) in cluster.iter().enumerate() {
        let w = pi[i] / k[i];
        tau += w;
        eps += w * g.kappa(v).value();
        beta += w * g.beta(v).value();
        z0 += w * inner.beta(i).value();
        for (t, r) in g.edges_from(v) {
            if !cluster.contains(&t) {
                *out.entry(t).or_insert(0.0) += w * r.value();
            }
        }
    }
    let lambda1 = (eps - z0) / tau;
    let eps_bar = scale_of(eps, base);
    let z0_scale = scale_of(z0, base);
    let (regime, autocatalytic) = classify(eps_bar, z0_scale, opts);
    let tau_inv = scale_of(1.0 / tau, base);
    Ok(ClusterStats {
        members: cluster.to_vec(),
        mode: Mode::Weighted,
        tol: opts.tol,
        tau_inv,
        eps_bar,
        z0: z0_scale,
        k_ext: scale_of(z0 / tau, base),
        lambda: if autocatalytic { scale_of(eps / tau, base) } else { None },
        z_weight: z0_scale.max(eps_bar),
        regime,
        autocatalytic,
        weighted: Some(WeightedStats { pi_tilde: pi, tau, eps_bar: eps, z0, lambda1 }),
        out_rates: out.into_iter().map(|(t, x)| (t, Mag::from_value(x / tau, base))).collect(),
        kappa: Mag::from_value(eps / tau, base),
        beta: Mag::from_value(beta / tau, base),
    })
}

/// Merges every cluster into a compound vertex named by `names` (one per cluster).
///
/// Untouched vertices keep their relative order and come first; compound vertices follow
/// in cluster order. Parallel edges created by the rewiring are aggregated by maximum in
/// scale mode and by sum in weighted mode. Returns the new graph and the map from old to
/// new vertex indices.
pub fn collapse(g: &SplitGraph, clusters: &[ClusterStats], names: &[String]) -> (SplitGraph, Vec<usize>) {
    assert_eq!(clusters.len(), names.len(), "one name per cluster");
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (p, c) in clusters.iter().enumerate() {
        for &v in &c.members {
            assert!(owner[v].is_none(), "clusters must be disjoint");
            owner[v] = Some(p);
        }
    }
    let untouched: Vec<usize> = (0..n).filter(|&v| owner[v].is_none()).collect();
    let mut map = vec![0usize; n];
    for (i, &v) in untouched.iter().enumerate() {
        map[v] = i;
    }
    for v in 0..n {
        if let Some(p) = owner[v] {
            map[v] = untouched.len() + p;
        }
    }
    let mut new_names: Vec<String> = untouched.iter().map(|&v| g.name(v).to_string()).collect();
    new_names.extend(names.iter().cloned());
    let base = g.base();
    let by_max = clusters.first().is_none_or(|c| c.mode == Mode::Scale);
    let mut edges: BTreeMap<(usize, usize), Mag> = BTreeMap::new();
    let mut put = |s: usize, t: usize, r: Mag| {
        let e = edges.entry((s, t)).or_insert(Mag::ZERO);
        *e = if by_max {
            if r.value() > e.value() {
                r
            } else {
                *e
            }
        } else {
            e.plus(r, base)
        };
    };
    for &v in &untouched {
        for (t, r) in g.edges_from(v) {
            put(map[v], map[t], r);
        }
    }
    for (p, c) in clusters.iter().enumerate() {
        for (&t, &r) in &c.out_rates {
            put(untouched.len() + p, map[t], r);
        }
    }
    let mut h = SplitGraph::new(base, new_names);
    for ((s, t), r) in edges {
        h.add_edge(s, t, r);
    }
    for &v in &untouched {
        h.add_kappa(map[v], g.kappa(v));
        h.add_beta(map[v], g.beta(v));
    }
    for (p, c) in clusters.iter().enumerate() {
        h.add_kappa(untouched.len() + p, c.kappa);
        h.add_beta(untouched.len() + p, c.beta);
    }
    (h, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn scale_opts() -> RenormOptions {
        RenormOptions::default()
    }

    #[test]
    fn example2_first_cluster_statistics() {
        let g = fixtures::example2_graph(5.0);
        let s = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        assert_eq!((s.tau_inv, s.eps_bar, s.z0), (Some(-5), Some(-7), Some(-12)));
        assert_eq!(s.regime, Regime::Autocatalytic);
        assert_eq!(s.lambda, Some(-12));
        assert_eq!(s.z_weight, Some(-7));
        assert_eq!(s.out_rates[&2].scale(), Some(-17));
    }

    #[test]
    fn example2_collapse_rewires_edges() {
        let g = fixtures::example2_graph(5.0);
        let s = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        let (h, map) = collapse(&g, &[s], &["G1".into()]);
        assert_eq!(map, vec![2, 2, 0, 1]);
        assert_eq!(h.edge(2, 0).scale(), Some(-17));
        assert_eq!(h.edge(0, 2).scale(), Some(-16));
        assert_eq!(h.kappa(2).scale(), Some(-12));
    }

    #[test]
    fn closed_cluster_collapses_to_isolated_vertex() {
        let mut g = SplitGraph::new(10.0, vec!["a".into(), "b".into()]);
        g.add_edge(0, 1, Mag::from_value(1.0, 10.0));
        g.add_edge(1, 0, Mag::from_value(0.1, 10.0));
        let s = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        assert_eq!(s.regime, Regime::Closed);
        let (h, _) = collapse(&g, &[s], &["G1".into()]);
        assert_eq!(h.n(), 1);
        assert_eq!(h.edge_count(), 0);
        assert!(h.kappa(0).is_zero());
    }

    #[test]
    fn resonance_follows_the_configured_branch() {
        let mut g = SplitGraph::new(10.0, vec!["1".into(), "2".into(), "3".into()]);
        g.add_edge(0, 1, Mag::from_scale(Some(0), 10.0));
        g.add_edge(1, 0, Mag::from_scale(Some(-2), 10.0));
        g.add_edge(1, 2, Mag::from_scale(Some(-5), 10.0));
        g.add_kappa(0, Mag::from_scale(Some(-3), 10.0));
        let auto = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        assert_eq!(auto.regime, Regime::Resonance);
        assert!(auto.autocatalytic);
        let free = RenormOptions { resonance_branch: ResonanceBranch::AssumeFree, ..scale_opts() };
        assert!(!cluster_stats(&g, &[0, 1], &free).unwrap().autocatalytic);
    }

    #[test]
    fn weighted_and_scale_modes_agree_within_one_unit() {
        let g = fixtures::example2_graph(10.0);
        let s = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        let w = cluster_stats(&g, &[0, 1], &RenormOptions { mode: Mode::Weighted, ..scale_opts() }).unwrap();
        for (a, b) in [(s.tau_inv, w.tau_inv), (s.eps_bar, w.eps_bar), (s.z0, w.z0), (s.lambda, w.lambda)] {
            assert!((a.unwrap() - b.unwrap()).abs() <= 1, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn degraded_regime_when_alpha_dominates() {
        let g = fixtures::example2_graph(5.0);
        let s = cluster_stats(&g, &[0, 1], &scale_opts()).unwrap();
        assert_eq!(s.regime_at(None), Regime::Autocatalytic);
        assert_eq!(s.regime_at(Some(-1)), Regime::Degraded);
        assert_eq!(s.z0_alpha(Some(-7)), Some(-2));
    }
}
