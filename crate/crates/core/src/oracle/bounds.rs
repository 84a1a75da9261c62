//! A-priori lower and upper bounds on the Lyapunov eigenvalue.

use crate::error::{Error, Result};
use crate::graph::is_strongly_connected;
use crate::network::SplitGraph;

/// Bound data for one reference vertex `sigma*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaBound {
    pub sigma: usize,
    /// `alpha_thr(m | sigma*)`, clamped to `0` when `y^2 <= 0`.
    pub lower: f64,
    /// `alpha_thr(M | sigma*)`; `None` when `y^2 < 0` (not informative).
    pub upper: Option<f64>,
    pub x_lower: f64,
    pub y2_lower: f64,
    pub x_upper: f64,
    pub y2_upper: f64,
}

/// Aggregated a-priori bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct AprioriBounds {
    /// `max` over `sigma*` of the lower bounds.
    pub lower: f64,
    /// `min` over `sigma*` of the informative upper bounds (`None` if there are none).
    pub upper: Option<f64>,
    /// `min |A~_vv|`.
    pub m: f64,
    /// `max |A~_vv|`.
    pub big_m: f64,
    /// `min (kappa_v - k^ext_v) / |A_vv|`.
    pub d: f64,
    /// `max (kappa_v - k^ext_v) / |A_vv|`.
    pub big_d: f64,
    pub per_sigma: Vec<SigmaBound>,
}

/// Positive root of `a^2 + x a - y^2 / 4 = 0`, evaluated without cancellation.
pub fn alpha_thr(x: f64, y2: f64) -> f64 {
    let r = (x * x + y2).max(0.0).sqrt();
    if x > 0.0 {
        y2 / (2.0 * (x + r))
    } else {
        (-x + r) / 2.0
    }
}

/// A-priori bounds for a strongly connected graph with a negative diagonal; degradation
/// counts as external rate.
pub fn apriori_bounds(g: &SplitGraph) -> Result<AprioriBounds> {
    let n = g.n();
    if n == 0 || !is_strongly_connected(&g.successors()) {
        return Err(Error::Reducible("a-priori bounds need a strongly connected graph".into()));
    }
    let tilde: Vec<f64> = (0..n).map(|v| g.k_out(v)).collect();
    let abs_a: Vec<f64> = (0..n).map(|v| g.abs_diag(v)).collect();
    if let Some(v) = (0..n).find(|&v| !(abs_a[v] > 0.0)) {
        return Err(Error::Precondition(format!(
            "a-priori bounds need a negative diagonal, vertex {} has |A_vv| = {}",
            g.name(v),
            abs_a[v]
        )));
    }
    let net: Vec<f64> = (0..n).map(|v| g.kappa(v).value() - g.beta(v).value()).collect();
    let m = tilde.iter().copied().fold(f64::INFINITY, f64::min);
    let big_m = tilde.iter().copied().fold(0.0, f64::max);
    let ratios: Vec<f64> = (0..n).map(|v| net[v] / abs_a[v]).collect();
    let d = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let big_d = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let per_sigma: Vec<SigmaBound> = (0..n)
        .map(|s| {
            let x_lower = abs_a[s] + m;
            let y2_lower = 4.0 * m * (d * tilde[s] + net[s]);
            let x_upper = abs_a[s] + big_m;
            let y2_upper = 4.0 * big_m * (big_d * tilde[s] + net[s]);
            SigmaBound {
                sigma: s,
                lower: if y2_lower > 0.0 { alpha_thr(x_lower, y2_lower) } else { 0.0 },
                upper: if y2_upper >= 0.0 { Some(alpha_thr(x_upper, y2_upper)) } else { None },
                x_lower,
                y2_lower,
                x_upper,
                y2_upper,
            }
        })
        .collect();
    let lower = per_sigma.iter().map(|b| b.lower).fold(0.0, f64::max);
    let upper = per_sigma.iter().filter_map(|b| b.upper).reduce(f64::min);
    Ok(AprioriBounds { lower, upper, m, big_m, d, big_d, per_sigma })
}

/// Bounds for the internal set of a larger graph; edges leaving it count as external rate.
pub fn apriori_bounds_internal(g: &SplitGraph, internal: &[usize]) -> Result<AprioriBounds> {
    apriori_bounds(&g.restrict(internal))
}
