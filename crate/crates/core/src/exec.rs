//! Execution policy: rayon data parallelism with a sequential fallback.

use nalgebra::DMatrix;

/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs sequentially.
    Parallel,
}

impl Default for Exec {
    fn default() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Dense product `a * b`, computing output columns in parallel when requested.
pub fn matmul(exec: Exec, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.ncols(), b.nrows(), "dimension mismatch");
    let cols: Vec<usize> = (0..b.ncols()).collect();
    let columns = map(exec, &cols, |&j| {
        let mut c = vec![0.0; a.nrows()];
        for k in 0..a.ncols() {
            let bkj = b[(k, j)];
            if bkj != 0.0 {
                for (i, ci) in c.iter_mut().enumerate() {
                    *ci += a[(i, k)] * bkj;
                }
            }
        }
        c
    });
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| columns[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_matches_nalgebra_in_both_modes() {
        let a = DMatrix::from_fn(7, 5, |i, j| (i as f64 + 1.0) / (j as f64 + 2.0));
        let b = DMatrix::from_fn(5, 4, |i, j| (i * j) as f64 - 1.5);
        let want = &a * &b;
        for exec in [Exec::Sequential, Exec::Parallel] {
            let got = matmul(exec, &a, &b);
            assert!((got - &want).abs().max() < 1e-12);
        }
    }

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u32> = (0..100).collect();
        assert_eq!(map(Exec::Parallel, &xs, |x| x * 2), map(Exec::Sequential, &xs, |x| x * 2));
    }
}
