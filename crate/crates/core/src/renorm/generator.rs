//! Renormalized generator of a graph with disjoint non-autocatalytic clusters.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::{Flavor, GeneratorMatrix, SplitGraph};
use crate::oracle::first_order_lambda;

/// Renormalized generator with row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormalizedGenerator {
    /// Clusters first (in the given order), then external vertices in increasing order.
    pub matrix: GeneratorMatrix,
    pub labels: Vec<String>,
    /// Bare vertices represented by each row.
    pub members: Vec<Vec<usize>>,
}

/// Renormalized generator `A^ren(alpha)`.
///
/// Each cluster becomes one vertex with diagonal `-Z(eps, alpha) / tau` and outgoing rates
/// `(1/tau) sum pi~_v k_{v -> x} / k_v`; rates into a cluster add up over its members and
/// the external block is the principal submatrix of `A(alpha)`. Edges between two clusters
/// are treated like edges to external vertices.
pub fn renormalized_generator(g: &SplitGraph, clusters: &[Vec<usize>], alpha: f64) -> Result<RenormalizedGenerator> {
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (p, c) in clusters.iter().enumerate() {
        if c.is_empty() {
            return Err(Error::Precondition("empty cluster".into()));
        }
        for &v in c {
            if v >= n || owner[v].is_some() {
                return Err(Error::Precondition("clusters must be disjoint vertex sets".into()));
            }
            owner[v] = Some(p);
        }
    }
    let external: Vec<usize> = (0..n).filter(|&v| owner[v].is_none()).collect();
    let q = clusters.len();
    let dim = q + external.len();
    let row_of = |v: usize| match owner[v] {
        Some(p) => p,
        None => q + external.binary_search(&v).unwrap(),
    };
    let mut m = DMatrix::zeros(dim, dim);
    let mut col_sums = DVector::zeros(dim);
    for (p, c) in clusters.iter().enumerate() {
        let f = first_order_lambda(g, c)?;
        if f.lambda1 > 0.0 {
            return Err(Error::Precondition(format!("cluster {p} is autocatalytic")));
        }
        let z = f.z0 + alpha * f.tau - f.eps_bar;
        m[(p, p)] = -z / f.tau;
        let mut leak = 0.0;
        for (i, &v) in c.iter().enumerate() {
            let k = g.k_out(v) + g.beta(v).value();
            let w = f.pi_tilde[i] / k;
            leak += w * g.beta(v).value();
            for (t, r) in g.edges_from(v) {
                let row = row_of(t);
                if row != p {
                    m[(row, p)] += w * r.value() / f.tau;
                }
            }
        }
        col_sums[p] = -alpha + (f.eps_bar - leak) / f.tau;
    }
    let a = g.generator(alpha, Flavor::Defective);
    for (j, &x) in external.iter().enumerate() {
        let col = q + j;
        for (t, r) in g.edges_from(x) {
            let row = row_of(t);
            if row >= q {
                m[(row, col)] = r.value();
            } else {
                m[(row, col)] += r.value();
            }
        }
        m[(col, col)] = a.m[(x, x)];
        col_sums[col] = a.col_sums[x];
    }
    let mut labels: Vec<String> = (1..=q).map(|p| format!("G{p}")).collect();
    labels.extend(external.iter().map(|&x| g.name(x).to_string()));
    let mut members: Vec<Vec<usize>> = clusters.to_vec();
    members.extend(external.iter().map(|&x| vec![x]));
    Ok(RenormalizedGenerator {
        matrix: GeneratorMatrix { m, flavor: Flavor::Defective, alpha, col_sums },
        labels,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mag::Mag;

    fn cycle_with_exits() -> SplitGraph {
        let b = 10.0;
        let mut g = SplitGraph::new(b, vec!["1".into(), "2".into(), "1x".into(), "2x".into()]);
        g.add_edge(0, 1, Mag::from_value(1.0, b));
        g.add_edge(1, 0, Mag::from_value(1e-2, b));
        g.add_edge(0, 2, Mag::from_value(1e-4, b));
        g.add_edge(1, 3, Mag::from_value(1e-5, b));
        g.add_edge(2, 0, Mag::from_value(1e-3, b));
        g.add_edge(3, 1, Mag::from_value(1e-3, b));
        g
    }

    #[test]
    fn conservative_columns_sum_to_zero() {
        let r = renormalized_generator(&cycle_with_exits(), &[vec![0, 1]], 0.0).unwrap();
        for j in 0..r.matrix.dim() {
            assert!(r.matrix.m.column(j).sum().abs() < 1e-12, "column {j}");
            assert!(r.matrix.col_sums[j].abs() < 1e-12);
        }
        assert_eq!(r.labels, vec!["G1", "1x", "2x"]);
    }

    #[test]
    fn exit_rates_scale_with_characteristic_rate() {
        let r = renormalized_generator(&cycle_with_exits(), &[vec![0, 1]], 0.0).unwrap();
        // k_{G -> 1x} ~ k_min xi_1 / k_1 = 1e-2 * 1e-4.
        let k = r.matrix.m[(1, 0)];
        assert!((k.log10() - (-6.0)).abs() <= 1.0, "{k}");
        assert_eq!(r.matrix.m[(0, 1)], 1e-3);
    }

    #[test]
    fn autocatalytic_cluster_is_rejected() {
        let mut g = cycle_with_exits();
        g.add_kappa(0, Mag::from_value(0.5, 10.0));
        assert!(matches!(renormalized_generator(&g, &[vec![0, 1]], 0.0), Err(Error::Precondition(_))));
    }
}
