//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use crn_lyapunov::mag::Mag;
use crn_lyapunov::network::SplitGraph;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rate `mantissa * b^n` with a mantissa in `[1, 2)`.
pub fn rate(rng: &mut ChaCha8Rng, base: f64, lo: i64, hi: i64) -> Mag {
    let n = rng.random_range(lo..=hi);
    Mag::from_value(rng.random_range(1.0..2.0) * base.powi(n as i32), base)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Strongly connected graph: a random Hamiltonian cycle plus random chords, with rate
/// scales in `[lo, 0]`.
pub fn strongly_connected(rng: &mut ChaCha8Rng, n: usize, base: f64, lo: i64, chord_p: f64) -> SplitGraph {
    let mut g = SplitGraph::new(base, names(n));
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for i in 0..n {
        let r = rate(rng, base, lo, 0);
        g.add_edge(order[i], order[(i + 1) % n], r);
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && g.edge(s, t).is_zero() && rng.random_bool(chord_p) {
                let r = rate(rng, base, lo, 0);
                g.add_edge(s, t, r);
            }
        }
    }
    g
}

/// Adds a deficiency rate to each vertex with probability `p`.
pub fn with_kappa(rng: &mut ChaCha8Rng, mut g: SplitGraph, p: f64, lo: i64, hi: i64) -> SplitGraph {
    for v in 0..g.n() {
        if rng.random_bool(p) {
            let r = rate(rng, g.base(), lo, hi);
            g.add_kappa(v, r);
        }
    }
    g
}

/// Adds, with probability `p`, a deficiency rate `k_v b^-u` with `u` uniform in `[lo, hi]`,
/// so that every diagonal entry stays negative.
pub fn with_relative_kappa(rng: &mut ChaCha8Rng, mut g: SplitGraph, p: f64, lo: f64, hi: f64) -> SplitGraph {
    for v in 0..g.n() {
        if rng.random_bool(p) {
            let u: f64 = rng.random_range(lo..hi);
            let r = Mag::from_value(g.k_out(v) * g.base().powf(-u), g.base());
            g.add_kappa(v, r);
        }
    }
    g
}

/// Random graph with `n` vertices, each edge present with probability `p`, plus
/// occasional deficiency and degradation.
pub fn sparse(rng: &mut ChaCha8Rng, n: usize, base: f64, lo: i64, p: f64) -> SplitGraph {
    let mut g = SplitGraph::new(base, names(n));
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                let r = rate(rng, base, lo, 0);
                g.add_edge(s, t, r);
            }
        }
        if rng.random_bool(0.3) {
            let r = rate(rng, base, lo, 0);
            g.add_kappa(s, r);
        }
        if rng.random_bool(0.2) {
            let r = rate(rng, base, lo, 0);
            g.add_beta(s, r);
        }
    }
    g
}

/// Row-stochastic matrix whose entries are zero with probability `zero_p`; every row keeps
/// at least one positive entry.
pub fn stochastic(rng: &mut ChaCha8Rng, n: usize, zero_p: f64) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        let keep = rng.random_range(0..n);
        for j in 0..n {
            if j == keep || !rng.random_bool(zero_p) {
                w[(i, j)] = rng.random_range(0.01..1.0);
            }
        }
        let s: f64 = w.row(i).sum();
        for j in 0..n {
            w[(i, j)] /= s;
        }
    }
    w
}

/// Random vector with entries summing to zero.
pub fn zero_sum(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mean = u.iter().sum::<f64>() / n as f64;
    for x in &mut u {
        *x -= mean;
    }
    u
}

/// Text of a random network whose branching reactions `s -> s' + s''` never reproduce the
/// reactant, with occasional degradations.
pub fn network_text(rng: &mut ChaCha8Rng, n: usize, base: f64, lo: i64) -> String {
    let mut text = format!("base {base}\nspecies {}\n", names(n).join(" "));
    for s in 0..n {
        let others: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        if others.is_empty() {
            break;
        }
        for _ in 0..rng.random_range(1..=3) {
            let scale = rng.random_range(lo..=0);
            let a = others[rng.random_range(0..others.len())];
            if rng.random_bool(0.4) {
                let c = others[rng.random_range(0..others.len())];
                text += &format!("reaction s{s} -> s{a} + s{c} scale {scale}\n");
            } else {
                text += &format!("reaction s{s} -> s{a} scale {scale}\n");
            }
        }
        if rng.random_bool(0.2) {
            text += &format!("degrade s{s} scale {}\n", rng.random_range(lo..=0));
        }
    }
    text
}
