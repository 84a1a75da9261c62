//! Sequential versus rayon execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crn_lyapunov::exec::{matmul, Exec};
use crn_lyapunov::fixtures;
use crn_lyapunov::mag::Mag;
use crn_lyapunov::network::{Flavor, SplitGraph};
use crn_lyapunov::oracle::{perron_with, PerronOptions};
use crn_lyapunov::renorm::RenormOptions;
use crn_lyapunov::sweep::{sweep, SweepSpec};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

/// Strongly connected graph on `n` vertices: a cycle plus random chords and deficiencies.
fn random_graph(n: usize, seed: u64) -> SplitGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let mut g = SplitGraph::new(10.0, names);
    for v in 0..n {
        g.add_edge(v, (v + 1) % n, Mag::from_value(rng.random_range(0.1..1.0), 10.0));
        for _ in 0..3 {
            let t = rng.random_range(0..n);
            if t != v {
                g.add_edge(v, t, Mag::from_value(rng.random_range(1e-4..1e-1), 10.0));
            }
        }
        if rng.random_bool(0.1) {
            g.add_kappa(v, Mag::from_value(rng.random_range(1e-4..1e-2), 10.0));
        }
    }
    g
}

fn bench_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul");
    for n in [64, 256] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..1.0));
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, n), &a, |bench, a| bench.iter(|| matmul(exec, a, a)));
        }
    }
    group.finish();
}

fn bench_perron(c: &mut Criterion) {
    let mut group = c.benchmark_group("perron");
    group.sample_size(10);
    for n in [64, 192] {
        let a = random_graph(n, 7).generator(0.0, Flavor::Defective);
        for (name, exec) in EXECS {
            let opts = PerronOptions { exec, ..PerronOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &a, |bench, a| {
                bench.iter(|| perron_with(a, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let net = fixtures::variant_network(-12);
    let spec = SweepSpec {
        reaction: fixtures::VARIANT_SWEPT_REACTION,
        from: -16,
        to: -8,
        step: 1,
        sigma0: 0,
        quantities: ["lambda_hier", "lambda_oracle", "pi_oracle_log:2b"].iter().map(|q| q.parse().unwrap()).collect(),
        options: RenormOptions::default(),
    };
    for (name, exec) in EXECS {
        group.bench_function(name, |bench| bench.iter(|| sweep(&net, &spec, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_matmul, bench_perron, bench_sweep);
criterion_main!(benches);
