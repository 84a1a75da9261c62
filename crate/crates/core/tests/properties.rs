//! Property tests over seeded random networks.

mod common;

use common::{network_text, rng, sparse, stochastic, strongly_connected, with_relative_kappa, zero_sum};
use crn_lyapunov::graph::reachable;
use crn_lyapunov::hierarchy::hier_estimates;
use crn_lyapunov::network::{parse_network, split, Flavor, WeightFlavor};
use crn_lyapunov::oracle::{
    doeblin_rho, dual_seminorm, excursion_weight, first_order_lambda, perron, perron_source, stationary_dense,
    Excursion, PerronOptions,
};
use crn_lyapunov::renorm::{
    cluster_stats, collapse, cutoff, degradation_dominant, internal_min_scale, maximal_dominant_sccs, out_scale,
    renormalize, truncate, Regime, RenormOptions,
};
use crn_lyapunov::sweep::{analyze, sweep, Quantity, SweepSpec};
use crn_lyapunov::{exec::Exec, fixtures};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generator_column_sums_are_kappa_minus_beta(seed in any::<u64>(), n in 1usize..8, alpha in 0.0f64..2.0) {
        let g = sparse(&mut rng(seed), n, 10.0, -6, 0.4);
        let a = g.generator(alpha, Flavor::Defective);
        for v in 0..n {
            let exact = g.kappa(v).value() - g.beta(v).value() - alpha;
            let summed: f64 = a.m.column(v).sum();
            let scale = g.abs_diag(v).abs() + alpha + 1.0;
            prop_assert!((a.col_sums[v] - exact).abs() <= 1e-15 * scale);
            prop_assert!((summed - exact).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn conservative_generator_has_zero_column_sums(seed in any::<u64>(), n in 1usize..8) {
        let g = sparse(&mut rng(seed), n, 10.0, -6, 0.4);
        let a = g.generator(0.0, Flavor::Conservative);
        for v in 0..n {
            let scale = g.k_out(v) + 1.0;
            prop_assert!(a.m.column(v).sum().abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn markov_weights_are_stochastic(seed in any::<u64>(), n in 1usize..8) {
        let g = sparse(&mut rng(seed), n, 10.0, -6, 0.4);
        let w = g.weights(0.0, WeightFlavor::Markov).unwrap();
        for v in 0..n {
            let s: f64 = w.m.row(v).sum();
            if g.k_out(v) > 0.0 {
                prop_assert!((s - 1.0).abs() <= 1e-12);
            } else {
                prop_assert_eq!(s, 0.0);
            }
        }
    }

    #[test]
    fn deficiency_weights_lie_in_unit_interval(seed in any::<u64>(), n in 2usize..8, alpha in 0.0f64..5.0) {
        let net = parse_network(&network_text(&mut rng(seed), n, 10.0, -5)).unwrap();
        let g = split(&net);
        for eps in g.deficiency_weights(alpha).unwrap() {
            prop_assert!((0.0..=1.0).contains(&eps));
        }
    }

    #[test]
    fn text_round_trip_preserves_split_graph(seed in any::<u64>()) {
        let net = fixtures::variant_network(-((seed % 16) as i64));
        let again = parse_network(&net.to_text()).unwrap();
        prop_assert_eq!(split(&again), split(&net));
    }

    #[test]
    fn cutoffs_are_nested(seed in any::<u64>(), n in 1usize..8, hi in -6i64..=0, gap in 0i64..4) {
        let g = sparse(&mut rng(seed), n, 10.0, -6, 0.4);
        let coarse = cutoff(&g, Some(hi));
        let fine = cutoff(&g, Some(hi - gap));
        prop_assert!(coarse.vertices.iter().all(|v| fine.vertices.contains(v)));
        prop_assert!(coarse.graph.edge_count() <= fine.graph.edge_count());
    }

    #[test]
    fn merges_reduce_vertices_and_cut_scales_decrease(seed in any::<u64>(), n in 1usize..9) {
        let g = sparse(&mut rng(seed), n, 10.0, -8, 0.35);
        let tree = renormalize(&g, RenormOptions::default()).unwrap();
        prop_assert!(tree.steps.len() <= n);
        let mut vertices = n;
        for step in &tree.steps {
            let merged: usize = step.clusters.iter().map(|&c| tree.nodes[c].children.len()).sum();
            prop_assert!(!step.clusters.is_empty());
            prop_assert!(merged >= 2 * step.clusters.len());
            vertices -= merged - step.clusters.len();
        }
        prop_assert_eq!(vertices, tree.graph.n());
        for pair in tree.steps.windows(2) {
            prop_assert!(pair[1].cutoff < pair[0].cutoff);
        }
    }

    #[test]
    fn first_level_clusters_are_closed_dominant_components(seed in any::<u64>(), n in 2usize..9) {
        let g = sparse(&mut rng(seed), n, 10.0, -8, 0.35);
        let opts = RenormOptions::default();
        let clusters = maximal_dominant_sccs(&g, opts.tol);
        let stats: Vec<_> = clusters.iter().map(|c| cluster_stats(&g, c, &opts).unwrap()).collect();
        let names: Vec<String> = (0..stats.len()).map(|k| format!("G{}", k + 1)).collect();
        let (h, map) = collapse(&g, &stats, &names);
        for c in &clusters {
            let compound = map[c[0]];
            prop_assert!(c.iter().all(|&v| map[v] == compound));
            let inside = internal_min_scale(&g, c, opts.tol);
            prop_assert!(inside.is_some());
            let edges = h.edges_from(compound).map(|(_, r)| r.scale()).max().flatten();
            prop_assert!(edges < inside);
            let degradation = h.beta(compound).scale();
            if c.iter().any(|&v| degradation_dominant(&g, v, opts.tol)) {
                prop_assert!(degradation <= inside);
            } else {
                prop_assert!(out_scale(&h, compound) < inside);
            }
        }
    }

    #[test]
    fn regime_matches_first_order_sign_away_from_walls(seed in any::<u64>(), n in 2usize..8) {
        let mut r = rng(seed);
        let g = strongly_connected(&mut r, n, 10.0, -6, 0.2);
        let g = with_relative_kappa(&mut r, g, 0.5, 0.0, 6.0);
        let mut g = g;
        if r.random_bool(0.5) {
            let v = r.random_range(0..n);
            g.add_beta(v, common::rate(&mut r, 10.0, -8, -1));
        }
        let opts = RenormOptions::default();
        for c in maximal_dominant_sccs(&g, opts.tol) {
            let stats = cluster_stats(&g, &c, &opts).unwrap();
            let gap = match (stats.eps_bar, stats.z0) {
                (Some(e), Some(z)) => (e - z).abs(),
                (None, None) => continue,
                _ => i64::MAX,
            };
            if gap < 2 {
                continue;
            }
            let fo = first_order_lambda(&g, &c).unwrap();
            match stats.regime {
                Regime::Autocatalytic => prop_assert!(fo.lambda1 > 0.0),
                Regime::Free | Regime::Closed => prop_assert!(fo.lambda1 <= 0.0),
                other => prop_assert!(false, "unexpected regime {other}"),
            }
        }
    }

    #[test]
    fn growth_is_monotone_across_cut_graphs(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let g = strongly_connected(&mut r, n, 10.0, -6, 0.3);
        let g = with_relative_kappa(&mut r, g, 0.5, 0.0, 4.0);
        let tree = renormalize(&g, RenormOptions::default()).unwrap();
        let mut previous = f64::NEG_INFINITY;
        for step in &tree.steps {
            let cut = truncate(&g, Some(step.cutoff));
            let lambda = perron_source(&cut, 0, PerronOptions::default()).unwrap().result.lambda_star;
            prop_assert!(previous <= lambda + 1e-12 * lambda.abs().max(1.0), "{previous} > {lambda}");
            previous = lambda;
        }
    }

    #[test]
    fn depth_dags_are_consistent_and_supports_match_reachability(seed in any::<u64>(), n in 2usize..9) {
        let g = sparse(&mut rng(seed), n, 10.0, -8, 0.35);
        let tree = renormalize(&g, RenormOptions::default()).unwrap();
        let est = hier_estimates(&tree, 0).unwrap();
        prop_assert!(est.dag.is_consistent());
        prop_assert!(est.dag.is_acyclic());
        let succ = tree.graph.successors();
        let cores = est.cores.core_vertices();
        let forward = reachable(&succ, &cores);
        let accessible = reachable(&succ, &[tree.top_vertex(0)]);
        for s in 0..n {
            let top = tree.top_vertex(s);
            prop_assert_eq!(est.pi_log[s].is_some(), forward[top], "pi support at {}", s);
            let back = reachable(&succ, &[top]);
            let co = accessible[top] && cores.iter().any(|&c| back[c]);
            prop_assert_eq!(est.vdagger_log[s].is_some(), co, "vdagger support at {}", s);
        }
    }

    #[test]
    fn doeblin_contracts_zero_sum_measures(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let w = stochastic(&mut r, n, 0.2);
        let d = doeblin_rho(&w, false).unwrap();
        let u = nalgebra::DVector::from_vec(zero_sum(&mut r, n));
        let wu = w.transpose() * &u;
        prop_assert!(wu.lp_norm(1) <= (1.0 - d.rho) * u.lp_norm(1) + 1e-12);

        let Ok(pi) = stationary_dense(&w) else { return Ok(()) };
        let mut f: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let mean: f64 = f.iter().zip(&pi).map(|(a, p)| a * p).sum();
        f.iter_mut().for_each(|x| *x -= mean);
        let wf = &w * nalgebra::DVector::from_vec(f.clone());
        prop_assert!(dual_seminorm(wf.as_slice()) <= (1.0 - d.rho) * dual_seminorm(&f) + 1e-12);
    }

    #[test]
    fn excursion_weight_brackets_lambda(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let g = strongly_connected(&mut r, n, 10.0, -3, 0.3);
        let g = with_relative_kappa(&mut r, g, 0.6, 0.0, 2.0);
        let lambda = perron(&g.generator(0.0, Flavor::Defective)).unwrap().lambda_star;
        let scale = g.k_out(0);
        let delta = 1e-6 * scale;
        let sigma = r.random_range(0..n);
        let above = excursion_weight(&g, lambda.max(0.0) + delta, sigma).unwrap();
        match above {
            Excursion::Finite(phi) => prop_assert!(phi < 1.0),
            Excursion::Divergent => prop_assert!(false, "divergent above lambda*"),
        }
        let further = excursion_weight(&g, lambda.max(0.0) + 10.0 * delta, sigma).unwrap();
        prop_assert!(further.value().unwrap() < above.value().unwrap());
        if lambda - delta > 0.0 {
            let below = excursion_weight(&g, lambda - delta, sigma).unwrap();
            prop_assert!(below.value().is_none_or(|phi| phi > 1.0));
        }
    }

    #[test]
    fn sweeps_are_independent_of_execution_strategy(from in -16i64..-8, len in 0i64..4) {
        let net = fixtures::variant_network(-12);
        let spec = SweepSpec {
            reaction: fixtures::VARIANT_SWEPT_REACTION,
            from,
            to: from + len,
            step: 1,
            sigma0: 0,
            quantities: vec!["lambda_hier".parse::<Quantity>().unwrap(), "pi_log:2b".parse().unwrap()],
            options: RenormOptions::default(),
        };
        let seq = sweep(&net, &spec, Exec::Sequential).unwrap();
        let par = sweep(&net, &spec, Exec::Parallel).unwrap();
        prop_assert_eq!(seq, par);
        prop_assert!(analyze(&net, 0, RenormOptions::default(), false).is_ok());
    }
}
