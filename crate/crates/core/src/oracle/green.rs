//! Truncated Green kernels `G_N(sigma, .) = sum_{l<N} (W^l)_{sigma, .}`.

use crate::error::{Error, Result};
use crate::network::WeightMatrix;

/// Magnitude above which the running sums are rescaled by `2^-RESCALE_BITS`.
const RESCALE_LIMIT: f64 = 1e250;
const RESCALE_BITS: i32 = 500;

/// Green kernel row at one horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenRow {
    pub horizon: usize,
    /// `G_N(sigma, .)` divided by `2^log2_scale`.
    pub values: Vec<f64>,
    /// `values / N`.
    pub normalized: Vec<f64>,
    pub log2_scale: i32,
}

/// Green kernel rows from one source at increasing horizons.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTable {
    pub source: usize,
    pub rows: Vec<GreenRow>,
}

impl GreenTable {
    /// Row at the largest horizon.
    pub fn last(&self) -> &GreenRow {
        self.rows.last().expect("green table has at least one row")
    }
}

/// Green kernel of `w` from `sigma`, recorded at each horizon in `horizons`.
pub fn green_kernel(w: &WeightMatrix, sigma: usize, horizons: &[usize]) -> Result<GreenTable> {
    let n = w.m.nrows();
    if sigma >= n {
        return Err(Error::UnknownVertex(sigma.to_string()));
    }
    if horizons.is_empty() || horizons.contains(&0) {
        return Err(Error::Precondition("horizons must be positive".into()));
    }
    let mut wanted = horizons.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let horizon = *wanted.last().unwrap();

    let mut term = vec![0.0; n];
    term[sigma] = 1.0;
    let mut sum = vec![0.0; n];
    let mut log2_scale = 0;
    let mut rows = Vec::with_capacity(wanted.len());
    let mut next_wanted = wanted.iter().peekable();
    for l in 1..=horizon {
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        if next_wanted.peek() == Some(&&l) {
            next_wanted.next();
            rows.push(GreenRow {
                horizon: l,
                values: sum.clone(),
                normalized: sum.iter().map(|x| x / l as f64).collect(),
                log2_scale,
            });
        }
        let mut next = vec![0.0; n];
        for (i, &ti) in term.iter().enumerate() {
            if ti != 0.0 {
                for (j, nj) in next.iter_mut().enumerate() {
                    *nj += ti * w.m[(i, j)];
                }
            }
        }
        term = next;
        let mx = sum.iter().chain(&term).fold(0.0f64, |a, &x| a.max(x));
        if mx > RESCALE_LIMIT {
            let f = 2f64.powi(-RESCALE_BITS);
            sum.iter_mut().chain(term.iter_mut()).for_each(|x| *x *= f);
            log2_scale += RESCALE_BITS;
        }
    }
    Ok(GreenTable { source: sigma, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::WeightFlavor;
    use nalgebra::DMatrix;

    fn flip() -> WeightMatrix {
        WeightMatrix {
            m: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            flavor: WeightFlavor::Markov,
            alpha: 0.0,
        }
    }

    #[test]
    fn first_horizon_is_an_indicator() {
        let t = green_kernel(&flip(), 1, &[1]).unwrap();
        assert_eq!(t.last().values, vec![0.0, 1.0]);
    }

    #[test]
    fn rows_are_monotone_in_horizon() {
        let t = green_kernel(&flip(), 0, &[1, 2, 5, 10]).unwrap();
        for pair in t.rows.windows(2) {
            assert!(pair[0].values.iter().zip(&pair[1].values).all(|(a, b)| a <= b));
        }
        assert_eq!(t.last().normalized, vec![0.5, 0.5]);
    }

    #[test]
    fn growing_kernel_is_rescaled() {
        let w = WeightMatrix { m: DMatrix::from_element(1, 1, 2.0), flavor: WeightFlavor::Defective, alpha: 0.0 };
        let t = green_kernel(&w, 0, &[2000]).unwrap();
        let row = t.last();
        assert!(row.log2_scale > 0 && row.values[0].is_finite());
        let log2 = row.values[0].log2() + row.log2_scale as f64;
        assert!((log2 - 2000.0).abs() < 1e-6);
    }
}
