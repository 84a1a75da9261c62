//! First-order Lyapunov eigenvalue of a cluster from its internal stationary measure.

use crate::error::Result;
use crate::network::{SplitGraph, WeightFlavor};
use crate::oracle::linear::stationary;

/// First-order cluster quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    /// `lambda_1 = (eps_bar - Z(0)) / tau`.
    pub lambda1: f64,
    /// `tau = sum pi~_v / k_v`.
    pub tau: f64,
    /// `eps_bar = sum pi~_v kappa_v / k_v`.
    pub eps_bar: f64,
    /// `Z(0) = sum pi~_v k^ext_v / k_v`.
    pub z0: f64,
    /// Stationary measure of the internal conservative chain (internal order).
    pub pi_tilde: Vec<f64>,
}

/// First-order quantities of `internal` inside `g`.
///
/// `k_v` counts internal and external transitions and degradation; edges leaving the
/// set and degradation make up `k^ext_v`.
pub fn first_order_lambda(g: &SplitGraph, internal: &[usize]) -> Result<FirstOrder> {
    let sub = g.restrict(internal);
    let n = sub.n();
    let pi_tilde = if n == 1 { vec![1.0] } else { stationary(&sub.weights(0.0, WeightFlavor::Markov)?)? };
    let mut tau = 0.0;
    let mut eps_bar = 0.0;
    let mut z0 = 0.0;
    for (v, &p) in pi_tilde.iter().enumerate() {
        let k_ext = sub.beta(v).value();
        let k = sub.k_out(v) + k_ext;
        tau += p / k;
        eps_bar += p * sub.kappa(v).value() / k;
        z0 += p * k_ext / k;
    }
    Ok(FirstOrder { lambda1: (eps_bar - z0) / tau, tau, eps_bar, z0, pi_tilde })
}
