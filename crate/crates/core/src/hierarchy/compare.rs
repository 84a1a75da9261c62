//! Deviation table between hierarchical estimates and oracle data.

use crate::network::SplitGraph;
use crate::oracle::SourceOracle;

use super::{HierEstimate, LambdaEstimate};

/// One compared quantity, in `log_b` units after aligning maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub quantity: String,
    /// `None` is `-inf`.
    pub hier: Option<f64>,
    pub oracle: Option<f64>,
    /// `|hier - oracle|`; 0 when both are `-inf`, `inf` when only one is.
    pub deviation: f64,
}

/// Per-quantity deviations and their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<Deviation>,
    pub max_deviation: f64,
}

impl Comparison {
    pub fn row(&self, quantity: &str) -> Option<&Deviation> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

fn deviation(h: Option<f64>, o: Option<f64>) -> f64 {
    match (h, o) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

fn log_b(x: f64, base: f64) -> Option<f64> {
    (x > 0.0).then(|| x.ln() / base.ln())
}

/// Aligns both vectors so that their maxima are 0.
fn aligned(h: Vec<Option<f64>>, o: Vec<Option<f64>>) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let top = |v: &[Option<f64>]| v.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let (th, to) = (top(&h), top(&o));
    let shift = |v: Vec<Option<f64>>, t: f64| v.into_iter().map(|x| x.map(|y| y - t)).collect();
    (shift(h, th), shift(o, to))
}

/// Relative size below which an oracle eigenvalue counts as non-positive.
const LAMBDA_ZERO: f64 = 1e-10;

/// Compares estimates for the source `sigma0` of the bare graph `g` with the oracle run on
/// the same source.
///
/// `pi` and `v_dagger` are compared after shifting both vectors so their maxima are 0;
/// `lambda` is compared directly. A non-positive estimate matches a non-positive oracle
/// eigenvalue.
pub fn compare(est: &HierEstimate, exact: &SourceOracle, g: &SplitGraph) -> Comparison {
    let base = g.base();
    let rate_scale = exact.vertices.iter().map(|&v| g.abs_diag(v).abs() + g.kappa(v).value()).fold(0.0, f64::max);
    let species = &exact.vertices;
    let mut rows = Vec::new();
    let lambda_star = exact.result.lambda_star;
    let oracle_positive = lambda_star > LAMBDA_ZERO * rate_scale;
    let (h, o, d) = match est.lambda {
        LambdaEstimate::Growth(n) => {
            let o = if oracle_positive { log_b(lambda_star, base) } else { None };
            (Some(n as f64), o, deviation(Some(n as f64), o))
        }
        LambdaEstimate::NonPositive => {
            let o = if oracle_positive { log_b(lambda_star, base) } else { None };
            (None, o, if oracle_positive { f64::INFINITY } else { 0.0 })
        }
    };
    rows.push(Deviation { quantity: "lambda".into(), hier: h, oracle: o, deviation: d });
    for (label, hier, oracle) in
        [("pi", &est.pi_log, &exact.result.pi_star), ("vdagger", &est.vdagger_log, &exact.result.v_dagger_star)]
    {
        let hv: Vec<Option<f64>> = species.iter().map(|&s| hier[s].map(|x| x as f64)).collect();
        let ov: Vec<Option<f64>> = oracle.iter().map(|&x| log_b(x, base)).collect();
        let (hv, ov) = aligned(hv, ov);
        for (i, &s) in species.iter().enumerate() {
            rows.push(Deviation {
                quantity: format!("{label}:{}", g.name(s)),
                hier: hv[i],
                oracle: ov[i],
                deviation: deviation(hv[i], ov[i]),
            });
        }
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Comparison { rows, max_deviation }
}
