//! Stationary measures, resolvents, path sums, excursion weights and boundary problems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exec::{matmul, Exec};
use crate::graph::{is_strongly_connected, reachable, reverse};
use crate::network::{GeneratorMatrix, SplitGraph, WeightFlavor, WeightMatrix};

/// Relative slack for sign tests on solutions of M-matrix systems.
const SIGN_SLACK: f64 = 1e-12;

/// Stationary distribution of an irreducible row-stochastic chain (GTH elimination).
pub fn stationary(w: &WeightMatrix) -> Result<Vec<f64>> {
    stationary_dense(&w.m)
}

/// Stationary distribution of an irreducible row-stochastic matrix (GTH elimination).
pub fn stationary_dense(w: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = w.nrows();
    if n == 0 {
        return Err(Error::Precondition("empty chain".into()));
    }
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && w[(i, j)] > 0.0).collect()).collect();
    if !is_strongly_connected(&succ) {
        return Err(Error::Reducible("chain is not irreducible".into()));
    }
    let mut p = w.clone();
    for i in 0..n {
        p[(i, i)] = 0.0;
    }
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| p[(k, j)]).sum();
        if s <= 0.0 {
            return Err(Error::Reducible("chain is not irreducible".into()));
        }
        for i in 0..k {
            p[(i, k)] /= s;
        }
        for i in 0..k {
            let pik = p[(i, k)];
            if pik != 0.0 {
                for j in 0..k {
                    p[(i, j)] += pik * p[(k, j)];
                }
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| pi[i] * p[(i, k)]).sum();
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    Ok(pi)
}

/// `(alpha I - A)^{-1}`; nonnegativity certifies `alpha > lambda*`.
pub fn resolvent(a: &GeneratorMatrix, alpha: f64) -> Result<DMatrix<f64>> {
    let n = a.dim();
    let m = DMatrix::identity(n, n) * alpha - &a.m;
    let inv = m.try_inverse().ok_or(Error::BelowThreshold { alpha })?;
    let scale = inv.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if !inv.iter().all(|x| x.is_finite()) || inv.iter().any(|&x| x < -SIGN_SLACK * scale) {
        return Err(Error::BelowThreshold { alpha });
    }
    Ok(inv.map(|x| x.max(0.0)))
}

/// Sum of `W^l` for `l = 0..count` by binary doubling.
fn power_sum(exec: Exec, w: &DMatrix<f64>, count: usize) -> DMatrix<f64> {
    let n = w.nrows();
    let mut s = DMatrix::zeros(n, n);
    let mut p = DMatrix::identity(n, n);
    if count == 0 {
        return s;
    }
    let bits = usize::BITS - count.leading_zeros();
    for b in (0..bits).rev() {
        // (s, p) = (sum_{l<c} W^l, W^c) -> doubled count
        let ps = matmul(exec, &p, &s);
        s += ps;
        p = matmul(exec, &p, &p);
        if (count >> b) & 1 == 1 {
            s += &p;
            p = matmul(exec, &p, w);
        }
    }
    s
}

fn path_sum_from_weights(g: &SplitGraph, alpha: f64, s: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::from_fn(n, n, |to, from| s[(from, to)] / (g.abs_diag(to) + alpha))
}

/// Truncated path expansion of the resolvent over paths of length at most `max_len`.
///
/// Entry `(v', v)` sums `w(alpha)_gamma / (|A_v'v'| + alpha)` over paths `v -> v'`, matching
/// the layout of [`resolvent`].
pub fn path_sum_resolvent(g: &SplitGraph, alpha: f64, max_len: usize, exec: Exec) -> Result<DMatrix<f64>> {
    let w = g.weights(alpha, WeightFlavor::Defective)?;
    let s = power_sum(exec, &w.m, max_len + 1);
    Ok(path_sum_from_weights(g, alpha, &s))
}

/// Path expansion with doubling path lengths until the relative entrywise change drops
/// below `tol`; returns the matrix and the final maximal path length.
pub fn path_sum_converged(
    g: &SplitGraph,
    alpha: f64,
    tol: f64,
    max_doublings: usize,
    exec: Exec,
) -> Result<(DMatrix<f64>, usize)> {
    let w = g.weights(alpha, WeightFlavor::Defective)?;
    let n = g.n();
    // s holds sum_{l < c} W^l, p holds W^c.
    let mut s = DMatrix::identity(n, n);
    let mut p = w.m.clone();
    let mut count = 1usize;
    for _ in 0..max_doublings {
        let ps = matmul(exec, &p, &s);
        let change = ps
            .iter()
            .zip(s.iter())
            .map(|(d, x)| {
                if *x > 0.0 {
                    d / x
                } else if *d > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        s += ps;
        p = matmul(exec, &p, &p);
        count *= 2;
        if change < tol {
            return Ok((path_sum_from_weights(g, alpha, &s), count - 1));
        }
    }
    Err(Error::NonConvergence { iterations: max_doublings, residual: f64::NAN })
}

/// Total weight of excursions returning to a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Excursion {
    Finite(f64),
    Divergent,
}

impl Excursion {
    pub fn value(&self) -> Option<f64> {
        match self {
            Excursion::Finite(x) => Some(*x),
            Excursion::Divergent => None,
        }
    }
}

/// Whether `(I - Q)` is a nonsingular M-matrix, tested by solving `(I - Q) x = 1` and
/// requiring `x >= 1` (the Neumann series is then convergent).
fn neumann_converges(q: &DMatrix<f64>) -> bool {
    let k = q.nrows();
    if k == 0 {
        return true;
    }
    let m = DMatrix::identity(k, k) - q;
    match m.lu().solve(&DVector::from_element(k, 1.0)) {
        Some(x) => x.iter().all(|&v| v.is_finite() && v >= 1.0 - 1e-9),
        None => false,
    }
}

fn sub_matrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Excursion weight `Phi(alpha)_sigma`, the sum of `w(alpha)_gamma` over first-return paths.
///
/// Only vertices both reachable from `sigma` and able to return to it take part; the
/// series is divergent when the absorbing-chain iteration matrix has spectral radius at
/// least one or a weight is singular.
pub fn excursion_weight(g: &SplitGraph, alpha: f64, sigma: usize) -> Result<Excursion> {
    if sigma >= g.n() {
        return Err(Error::UnknownVertex(sigma.to_string()));
    }
    let succ = g.successors();
    let fwd = reachable(&succ, &[sigma]);
    let bwd = reachable(&reverse(&succ), &[sigma]);
    let inner: Vec<usize> = (0..g.n()).filter(|&v| v != sigma && fwd[v] && bwd[v]).collect();
    let mut involved = inner.clone();
    involved.push(sigma);
    if involved.iter().any(|&v| g.abs_diag(v) + alpha <= 0.0 && g.edges_from(v).next().is_some()) {
        return Ok(Excursion::Divergent);
    }
    let n = g.n();
    let w = DMatrix::from_fn(n, n, |i, j| {
        let k = g.edge(i, j).value();
        if k > 0.0 && involved.contains(&i) {
            k / (g.abs_diag(i) + alpha)
        } else {
            0.0
        }
    });
    let q = sub_matrix(&w, &inner, &inner);
    if !neumann_converges(&q) {
        return Ok(Excursion::Divergent);
    }
    let k = inner.len();
    let mut phi = 0.0;
    if k > 0 {
        let rhs = DVector::from_iterator(k, inner.iter().map(|&i| w[(i, sigma)]));
        let f = (DMatrix::identity(k, k) - q).lu().solve(&rhs).ok_or(Error::BelowThreshold { alpha })?;
        phi = inner.iter().enumerate().map(|(j, &i)| w[(sigma, i)] * f[j]).sum();
    }
    if !(phi >= 0.0) || !phi.is_finite() {
        return Ok(Excursion::Divergent);
    }
    Ok(Excursion::Finite(phi))
}

fn check_internal(g: &SplitGraph, internal: &[usize], external: usize) -> Result<()> {
    if internal.is_empty() || internal.len() >= g.n() {
        return Err(Error::Precondition("internal set must be a proper nonempty subset".into()));
    }
    if internal.iter().any(|&v| v >= g.n()) || external >= g.n() {
        return Err(Error::Precondition("vertex index out of range".into()));
    }
    if internal.contains(&external) {
        return Err(Error::Precondition("boundary vertex lies in the internal set".into()));
    }
    Ok(())
}

/// Exit probabilities `f(alpha)` from the internal set to `target`.
///
/// Solves `(I - W(alpha)_II) f = W(alpha)_{I,target}`.
pub fn exit_probabilities(g: &SplitGraph, internal: &[usize], alpha: f64, target: usize) -> Result<Vec<f64>> {
    check_internal(g, internal, target)?;
    let sub = g.restrict(internal);
    let w_int = sub.weights(alpha, WeightFlavor::Defective).map_err(|_| Error::BelowThreshold { alpha })?;
    if !neumann_converges(&w_int.m) {
        return Err(Error::BelowThreshold { alpha });
    }
    let k = internal.len();
    let rhs = DVector::from_iterator(k, internal.iter().map(|&i| g.edge(i, target).value() / (g.abs_diag(i) + alpha)));
    let f = (DMatrix::identity(k, k) - &w_int.m).lu().solve(&rhs).ok_or(Error::BelowThreshold { alpha })?;
    Ok(f.iter().copied().collect())
}

/// Solution of `A(alpha) v = 0` on the internal set with boundary value `1` at `source`.
///
/// Equivalent to `(-A(alpha)_II) v = k_{source -> I}`.
pub fn adjoint_boundary_solve(g: &SplitGraph, internal: &[usize], alpha: f64, source: usize) -> Result<Vec<f64>> {
    check_internal(g, internal, source)?;
    let sub = g.restrict(internal);
    let w_int = sub.weights(alpha, WeightFlavor::Defective).map_err(|_| Error::BelowThreshold { alpha })?;
    if !neumann_converges(&w_int.m) {
        return Err(Error::BelowThreshold { alpha });
    }
    let k = internal.len();
    let a = sub.generator(alpha, crate::network::Flavor::Defective);
    let rhs = DVector::from_iterator(k, internal.iter().map(|&i| g.edge(source, i).value()));
    let v = (-a.m).lu().solve(&rhs).ok_or(Error::BelowThreshold { alpha })?;
    Ok(v.iter().copied().collect())
}
