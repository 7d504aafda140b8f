use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use super::CMatrix;
use crate::error::{Error, Result};

/// Eigenvalues of a square complex matrix.
///
/// Triangular input returns its diagonal untouched. Otherwise the matrix is
/// reduced to Hessenberg form and iterated with single-shift complex QR
/// (Wilkinson shifts, exceptional shifts every eleventh stalled step).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.rows();
    if a.is_upper_triangular() || a.is_lower_triangular() {
        return Ok((0..n).map(|i| a[(i, i)]).collect());
    }
    let mut h = a.clone();
    hessenberg(&mut h, None);
    hessenberg_qr(&mut h, None)
}

/// Complex Schur form `A = Q R Qᴴ` with `Q` unitary and `R` upper triangular.
pub fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    assert!(a.is_square(), "schur of a non-square matrix");
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if !a.is_upper_triangular() {
        hessenberg(&mut h, Some(&mut q));
        hessenberg_qr(&mut h, Some(&mut q))?;
        for i in 0..n {
            for j in 0..i {
                h[(i, j)] = Complex64::zero();
            }
        }
    }
    Ok((q, h))
}

fn hessenberg(a: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let norm = libm::sqrt((k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vn = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // A ← (I − 2vvᴴ) A
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= *vi * dot * 2.0;
            }
        }
        // A ← A (I − 2vvᴴ)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| a[(i, k + 1 + t)] * vi).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= dot * vi.conj() * 2.0;
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| q[(i, k + 1 + t)] * vi).sum();
                for (t, vi) in v.iter().enumerate() {
                    q[(i, k + 1 + t)] -= dot * vi.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::zero();
        }
    }
}

fn hessenberg_qr(h: &mut CMatrix, mut q: Option<&mut CMatrix>) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let max_iter = 100 * n.max(1);
    let mut total = 0usize;
    let mut stalled = 0usize;
    let mut hi = n.saturating_sub(1);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if sub <= f64::EPSILON * diag || sub <= f64::EPSILON * f64::EPSILON * scale {
                h[(l, l - 1)] = Complex64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }
        total += 1;
        stalled += 1;
        if total > max_iter {
            return Err(Error::NoConvergence(total));
        }
        let mu = if stalled % 11 == 10 {
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.5)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(h, l, hi, mu, q.as_deref_mut());
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One explicit shifted QR sweep on the active block `l..=hi`. With `q`
/// present the rotations also update the rest of the matrix and are
/// accumulated, so the result stays a similarity of the input.
fn qr_step(h: &mut CMatrix, l: usize, hi: usize, mu: Complex64, mut q: Option<&mut CMatrix>) {
    let n = h.rows();
    let full = q.is_some();
    let col_end = if full { n - 1 } else { hi };
    let row_start = if full { 0 } else { l };
    for k in l..=hi {
        h[(k, k)] -= mu;
    }
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = libm::sqrt(x.norm_sqr() + y.norm_sqr());
        let (c, s) = if r == 0.0 {
            (1.0, Complex64::zero())
        } else if x.norm() == 0.0 {
            (0.0, Complex64::new(1.0, 0.0))
        } else {
            (x.norm() / r, (x / x.norm()) * y.conj() / r)
        };
        for j in k..=col_end {
            let p = h[(k, j)];
            let q = h[(k + 1, j)];
            h[(k, j)] = p * c + s * q;
            h[(k + 1, j)] = -s.conj() * p + q * c;
        }
        rotations.push((c, s));
    }
    for (offset, (c, s)) in rotations.into_iter().enumerate() {
        let k = l + offset;
        for i in row_start..=(k + 2).min(hi) {
            let p = h[(i, k)];
            let r = h[(i, k + 1)];
            h[(i, k)] = p * c + r * s.conj();
            h[(i, k + 1)] = -p * s + r * c;
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let p = q[(i, k)];
                let r = q[(i, k + 1)];
                q[(i, k)] = p * c + r * s.conj();
                q[(i, k + 1)] = -p * s + r * c;
            }
        }
    }
    for k in l..=hi {
        h[(k, k)] += mu;
    }
}
