//! Doeblin contraction coefficients of row-stochastic matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{is_strongly_connected, period};

/// Row-sum tolerance for the stochasticity check.
const STOCHASTIC_TOL: f64 = 1e-9;

/// Doeblin coefficient, with the period and power used by the averaging procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Doeblin {
    pub rho: f64,
    /// Period `p` of the chain (`1` without averaging).
    pub period: usize,
    /// Power `q` applied to the averaged matrix (`1` without averaging).
    pub q: usize,
}

fn check_stochastic(w: &DMatrix<f64>) -> Result<()> {
    if w.nrows() != w.ncols() || w.nrows() == 0 {
        return Err(Error::NotStochastic("matrix must be square and nonempty".into()));
    }
    for (i, row) in w.row_iter().enumerate() {
        if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::NotStochastic(format!("row {i} has a negative or non-finite entry")));
        }
        let s: f64 = row.sum();
        if (s - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotStochastic(format!("row {i} sums to {s}")));
        }
    }
    Ok(())
}

/// `rho = sum_j min_i W_ij`.
pub fn rho(w: &DMatrix<f64>) -> f64 {
    w.column_iter().map(|c| c.iter().copied().fold(f64::INFINITY, f64::min)).sum()
}

/// Doeblin coefficient, optionally after averaging over the period.
///
/// With averaging, `W` is replaced by `Wbar^q` where `Wbar = (1/p) sum_{t=1..p} W^t` and
/// `q` is minimal such that every entry is positive, capped at `(n-1)^2 + 1`.
pub fn doeblin_rho(w: &DMatrix<f64>, average: bool) -> Result<Doeblin> {
    check_stochastic(w)?;
    if !average {
        return Ok(Doeblin { rho: rho(w), period: 1, q: 1 });
    }
    let n = w.nrows();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && w[(i, j)] > 0.0).collect()).collect();
    let p = if is_strongly_connected(&succ) && (0..n).all(|i| w[(i, i)] == 0.0) { period(&succ) } else { 1 };
    let mut power = w.clone();
    let mut avg = w.clone();
    for _ in 1..p {
        power = &power * w;
        avg += &power;
    }
    avg /= p as f64;
    let cap = (n - 1) * (n - 1) + 1;
    let mut acc = avg.clone();
    let mut q = 1;
    while q < cap && acc.iter().any(|&x| x <= 0.0) {
        acc = &acc * &avg;
        q += 1;
    }
    Ok(Doeblin { rho: rho(&acc), period: p, q })
}

/// `||f||*_inf = (max f - min f) / 2`, the dual seminorm of zero-mean measures.
pub fn dual_seminorm(f: &[f64]) -> f64 {
    let max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = f.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / 2.0
}
