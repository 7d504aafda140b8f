use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::CMatrix;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, in the order of `singular_values`.
    pub v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD. Small singular values come out with
/// high relative accuracy, which is what the null-space oracle relies on.
pub fn svd_jacobi(a: &CMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { Complex64::one() } else { Complex64::zero() }).collect()).collect();
    let tol = 1e-15;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let back = phase.conj();
                rotate(&mut cols, p, q, c, s, back);
                rotate(&mut v, p, q, c, s, back);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> =
        cols.iter().enumerate().map(|(j, c)| (libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum::<f64>()), j)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
    let vm = CMatrix::from_fn(n, n, |i, k| v[order[k].1][i]);
    Svd { singular_values: order.iter().map(|o| o.0).collect(), v: vm }
}

/// Rotates columns `p`, `q` with the phase of `q` absorbed first.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, back: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * back;
        let nx = *x * c - yq * s;
        let ny = *x * s + yq * c;
        *x = nx;
        *y = ny;
    }
}

/// `(σ_min, v)` with `‖Av‖ = σ_min`, `‖v‖ = 1`.
pub fn smallest_singular_triplet(a: &CMatrix) -> (f64, Vec<Complex64>) {
    let svd = svd_jacobi(a);
    let n = a.cols();
    let k = n - 1;
    let sigma = if a.rows() < n { 0.0 } else { svd.singular_values[k] };
    (sigma, (0..n).map(|i| svd.v[(i, k)]).collect())
}
