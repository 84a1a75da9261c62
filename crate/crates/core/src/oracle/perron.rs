//! Perron eigendata of Metzler generators by repeated squaring of `A + cI`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exec::{matmul, Exec};
use crate::graph::{is_strongly_connected, reachable, reverse, sccs};
use crate::network::{Flavor, GeneratorMatrix, SplitGraph};

/// Lyapunov eigenvalue with right/left eigenvectors and Lyapunov weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub lambda_star: f64,
    /// Right eigenvector, `sum v* = 1`.
    pub v_star: Vec<f64>,
    /// Left eigenvector, `<v†*, v*> = 1`.
    pub v_dagger_star: Vec<f64>,
    /// `pi*_v = (|A_vv| + lambda*) v*_v`, rescaled to sum to 1.
    pub pi_star: Vec<f64>,
    /// Number of squarings performed (the equivalent power count is `2^iterations`).
    pub iterations: usize,
    /// `||A v* - lambda* v*||_inf / (||A||_inf ||v*||_inf)`.
    pub residual: f64,
}

/// Solver settings.
#[derive(Debug, Clone, Copy)]
pub struct PerronOptions {
    /// Relative tolerance on the rank-one defect of the squared matrix.
    pub tol_rel: f64,
    pub max_squarings: usize,
    pub exec: Exec,
}

impl Default for PerronOptions {
    fn default() -> PerronOptions {
        PerronOptions { tol_rel: 1e-12, max_squarings: 96, exec: Exec::default() }
    }
}

/// Perron data of an irreducible generator with default options.
pub fn perron(a: &GeneratorMatrix) -> Result<OracleResult> {
    perron_with(a, PerronOptions::default())
}

/// Perron data of an irreducible generator.
///
/// `M = A + cI` has a positive diagonal, so it is primitive; `M^(2^s)` normalized by its
/// largest entry converges to the rank-one projector `v u^T`. The eigenvalue is recovered
/// from the exact column sums, `lambda* = sum_v colsum_v v_v / sum_v v_v`.
pub fn perron_with(a: &GeneratorMatrix, opts: PerronOptions) -> Result<OracleResult> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Precondition("empty generator".into()));
    }
    if !is_strongly_connected(&a.successors()) {
        return Err(Error::Reducible("generator graph is not strongly connected".into()));
    }
    if n == 1 {
        return Ok(OracleResult {
            lambda_star: a.col_sums[0],
            v_star: vec![1.0],
            v_dagger_star: vec![1.0],
            pi_star: vec![1.0],
            iterations: 0,
            residual: 0.0,
        });
    }
    let dmax = (0..n).map(|v| a.m[(v, v)].abs()).fold(0.0, f64::max);
    let offmax = a.m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let c = 2.0 * dmax.max(offmax).max(f64::MIN_POSITIVE);
    let mut p = a.m.clone();
    for v in 0..n {
        p[(v, v)] += c;
    }
    normalize_max(&mut p);

    let mut defect = f64::INFINITY;
    let mut converged_at = None;
    for s in 1..=opts.max_squarings {
        p = matmul(opts.exec, &p, &p);
        normalize_max(&mut p);
        defect = rank_one_defect(&p);
        if defect < opts.tol_rel {
            converged_at = Some(s);
            break;
        }
    }
    let Some(mut iterations) = converged_at else {
        return Err(Error::NonConvergence { iterations: opts.max_squarings, residual: defect });
    };
    // Two extra squarings polish the projector to machine precision.
    for _ in 0..2 {
        p = matmul(opts.exec, &p, &p);
        normalize_max(&mut p);
        iterations += 1;
    }

    let mut v: Vec<f64> = (0..n).map(|i| p.row(i).sum()).collect();
    let mut u: Vec<f64> = (0..n).map(|j| p.column(j).sum()).collect();
    if v.iter().chain(u.iter()).any(|&x| !(x > 0.0)) {
        return Err(Error::Reducible("non-positive Perron vector component".into()));
    }
    scale_to_sum(&mut v);
    let lambda = (0..n).map(|i| a.col_sums[i] * v[i]).sum::<f64>() / v.iter().sum::<f64>();
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    u.iter_mut().for_each(|x| *x /= dot);
    let mut pi: Vec<f64> = (0..n).map(|i| (a.abs_diag(i) + lambda) * v[i]).collect();
    scale_to_sum(&mut pi);
    let residual = residual(&a.m, &v, lambda);
    Ok(OracleResult { lambda_star: lambda, v_star: v, v_dagger_star: u, pi_star: pi, iterations, residual })
}

fn normalize_max(p: &mut DMatrix<f64>) {
    let mx = p.iter().fold(0.0f64, |acc, &x| acc.max(x));
    if mx > 0.0 {
        *p /= mx;
    }
}

fn scale_to_sum(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    if s != 0.0 {
        x.iter_mut().for_each(|y| *y /= s);
    }
}

/// Largest relative deviation of `P` from the rank-one matrix `(P1)(1^T P) / (1^T P 1)`.
fn rank_one_defect(p: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    let r: Vec<f64> = (0..n).map(|i| p.row(i).sum()).collect();
    let c: Vec<f64> = (0..n).map(|j| p.column(j).sum()).collect();
    let total: f64 = r.iter().sum();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let model = r[i] * (c[j] / total);
            if model < 1e-280 {
                continue;
            }
            worst = worst.max((p[(i, j)] - model).abs() / model);
        }
    }
    worst
}

fn residual(m: &DMatrix<f64>, v: &[f64], lambda: f64) -> f64 {
    let n = m.nrows();
    let norm_a = (0..n).map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let norm_v = v.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let av: f64 = (0..n).map(|j| m[(i, j)] * v[j]).sum();
        worst = worst.max((av - lambda * v[i]).abs());
    }
    if norm_a * norm_v > 0.0 {
        worst / (norm_a * norm_v)
    } else {
        worst
    }
}

/// Oracle data restricted to the vertices accessible from a source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceOracle {
    /// Accessible vertices (original indices, increasing); vectors are indexed alike.
    pub vertices: Vec<usize>,
    pub result: OracleResult,
    /// Strongly connected block carrying the Lyapunov eigenvalue (original indices).
    pub dominant_block: Vec<usize>,
}

impl SourceOracle {
    /// Position of an original vertex in the restricted vectors.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

/// Perron data of the graph restricted to vertices accessible from `sigma0`.
///
/// Reducible restrictions are handled block-wise: inert sinks (no outgoing edges, no
/// deficiency or degradation) are boundary vertices, the eigenvalue is the largest block
/// eigenvalue over the remaining strongly connected blocks, and the eigenvectors are
/// extended to descendants (right) and ancestors (left) of that block by linear solves.
pub fn perron_source(g: &SplitGraph, sigma0: usize, opts: PerronOptions) -> Result<SourceOracle> {
    if sigma0 >= g.n() {
        return Err(Error::UnknownVertex(sigma0.to_string()));
    }
    let seen = reachable(&g.successors(), &[sigma0]);
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| seen[v]).collect();
    let sub = g.restrict(&vertices);
    let a = sub.generator(0.0, Flavor::Defective);
    let (result, block) = perron_reducible(&a, opts)?;
    let dominant_block = block.iter().map(|&i| vertices[i]).collect();
    Ok(SourceOracle { vertices, result, dominant_block })
}

/// Block-wise Perron data of a possibly reducible generator (see [`perron_source`]).
pub fn perron_reducible(a: &GeneratorMatrix, opts: PerronOptions) -> Result<(OracleResult, Vec<usize>)> {
    let n = a.dim();
    let succ = a.successors();
    let comps = sccs(&succ);
    if comps.len() == 1 {
        return Ok((perron_with(a, opts)?, (0..n).collect()));
    }
    let inert = |c: &Vec<usize>| c.len() == 1 && succ[c[0]].is_empty() && a.m[(c[0], c[0])] == 0.0;
    let mut best: Option<(f64, usize, OracleResult)> = None;
    for (ci, c) in comps.iter().enumerate() {
        if inert(c) {
            continue;
        }
        let block = a.principal(c);
        let r = perron_with(&block, opts)?;
        if best.as_ref().is_none_or(|(l, _, _)| r.lambda_star > *l) {
            best = Some((r.lambda_star, ci, r));
        }
    }
    let Some((lambda, bi, block_result)) = best else {
        // Only inert vertices: the source is itself an inert sink.
        let mut v = vec![0.0; n];
        v[comps[0][0]] = 1.0;
        return Ok((
            OracleResult {
                lambda_star: 0.0,
                v_star: v.clone(),
                v_dagger_star: v.clone(),
                pi_star: v,
                iterations: 0,
                residual: 0.0,
            },
            comps[0].clone(),
        ));
    };
    let block = comps[bi].clone();
    let in_block = |x: usize| block.contains(&x);
    let is_inert_vertex = |x: usize| succ[x].is_empty() && a.m[(x, x)] == 0.0;

    // Right vector on the block and its non-inert descendants.
    let down = reachable(&succ, &block);
    let mut v = vec![0.0; n];
    for (k, &x) in block.iter().enumerate() {
        v[x] = block_result.v_star[k];
    }
    let desc: Vec<usize> = (0..n).filter(|&x| down[x] && !in_block(x) && !is_inert_vertex(x)).collect();
    if !desc.is_empty() {
        let k = desc.len();
        let mut m = DMatrix::zeros(k, k);
        let mut rhs = nalgebra::DVector::zeros(k);
        for (i, &x) in desc.iter().enumerate() {
            for (j, &y) in desc.iter().enumerate() {
                m[(i, j)] = if i == j { lambda - a.m[(x, y)] } else { -a.m[(x, y)] };
            }
            rhs[i] = block.iter().map(|&b| a.m[(x, b)] * v[b]).sum();
        }
        let sol = m.lu().solve(&rhs).ok_or_else(|| Error::Reducible("tied block eigenvalues downstream".into()))?;
        for (i, &x) in desc.iter().enumerate() {
            v[x] = sol[i];
        }
    }
    // Inert sinks receive the flux; their right component is flux / lambda when positive.
    let mut flux = vec![0.0; n];
    for x in (0..n).filter(|&x| down[x] && is_inert_vertex(x)) {
        flux[x] = (0..n).filter(|&y| y != x).map(|y| a.m[(x, y)] * v[y]).sum();
        v[x] = if lambda > 0.0 { flux[x] / lambda } else { 0.0 };
    }

    // Left vector on the block and its ancestors.
    let up = reachable(&reverse(&succ), &block);
    let mut u = vec![0.0; n];
    for (k, &x) in block.iter().enumerate() {
        u[x] = block_result.v_dagger_star[k];
    }
    let anc: Vec<usize> = (0..n).filter(|&x| up[x] && !in_block(x)).collect();
    if !anc.is_empty() {
        let k = anc.len();
        let mut m = DMatrix::zeros(k, k);
        let mut rhs = nalgebra::DVector::zeros(k);
        for (i, &x) in anc.iter().enumerate() {
            for (j, &y) in anc.iter().enumerate() {
                m[(i, j)] = if i == j { lambda - a.m[(y, x)] } else { -a.m[(y, x)] };
            }
            rhs[i] = block.iter().map(|&b| a.m[(b, x)] * u[b]).sum();
        }
        let sol = m.lu().solve(&rhs).ok_or_else(|| Error::Reducible("tied block eigenvalues upstream".into()))?;
        for (i, &x) in anc.iter().enumerate() {
            u[x] = sol[i];
        }
    }

    let mut pi: Vec<f64> =
        (0..n).map(|x| if is_inert_vertex(x) { flux[x] } else { (a.abs_diag(x) + lambda) * v[x] }).collect();
    scale_to_sum(&mut pi);
    scale_to_sum(&mut v);
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    if dot > 0.0 {
        u.iter_mut().for_each(|x| *x /= dot);
    }
    Ok((
        OracleResult {
            lambda_star: lambda,
            v_star: v,
            v_dagger_star: u,
            pi_star: pi,
            iterations: block_result.iterations,
            residual: block_result.residual,
        },
        block,
    ))
}
