//! Dense least squares by Householder QR, sized for a handful of columns.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative threshold on `|R_jj| / ‖column j‖` below which the design is
/// treated as rank deficient.
const RANK_TOL: f64 = 1e-10;

/// Solves `min ‖A x − b‖₂` where `a` holds `rows` rows of `cols` entries in
/// row-major order.
pub(crate) fn least_squares(a: &[f64], b: &[f64], rows: usize, cols: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), rows * cols);
    debug_assert_eq!(b.len(), rows);
    if rows < cols {
        return Err(Error::DegenerateFeatures);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let at = |i: usize, j: usize| i * cols + j;

    let col_norms: Vec<f64> = (0..cols)
        .map(|j| libm::sqrt((0..rows).map(|i| a[at(i, j)] * a[at(i, j)]).sum()))
        .collect();

    let mut v = vec![0.0; rows];
    for k in 0..cols {
        let norm = libm::sqrt((k..rows).map(|i| a[at(i, k)] * a[at(i, k)]).sum());
        if !(norm > RANK_TOL * col_norms[k]) || col_norms[k] == 0.0 {
            return Err(Error::DegenerateFeatures);
        }
        let alpha = if a[at(k, k)] > 0.0 { -norm } else { norm };
        for i in k..rows {
            v[i] = a[at(i, k)];
        }
        v[k] -= alpha;
        let vnorm2: f64 = (k..rows).map(|i| v[i] * v[i]).sum();
        if vnorm2 > 0.0 {
            for j in k..cols {
                let dot: f64 = (k..rows).map(|i| v[i] * a[at(i, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in k..rows {
                    a[at(i, j)] -= f * v[i];
                }
            }
            let dot: f64 = (k..rows).map(|i| v[i] * b[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                b[i] -= f * v[i];
            }
        }
    }

    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = b[k];
        for j in k + 1..cols {
            s -= a[at(k, j)] * x[j];
        }
        x[k] = s / a[at(k, k)];
    }
    if x.iter().all(|c| c.is_finite()) {
        Ok(x)
    } else {
        Err(Error::DegenerateFeatures)
    }
}
