use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMatrix;

/// LU factorization with partial pivoting, `PA = LU`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    /// Smallest pivot modulus; zero means exactly singular.
    pub min_pivot: f64,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Lu {
        assert!(a.is_square());
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let floor = f64::EPSILON * a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().partial_cmp(&lu[(j, k)].norm()).unwrap_or(core::cmp::Ordering::Equal))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let pivot_abs = lu[(k, k)].norm();
            min_pivot = min_pivot.min(pivot_abs);
            if pivot_abs == 0.0 {
                // keep going with a tiny pivot so solves stay finite; the
                // caller reads `min_pivot`
                lu[(k, k)] = Complex64::new(floor, 0.0);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Lu { lu, perm, min_pivot }
    }

    /// Solves `Ax = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows();
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let yj = y[j];
                y[i] -= l * yj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let yj = y[j];
                y[i] -= u * yj;
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }

    /// Solves `Aᴴx = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows();
        // Aᴴ = Uᴴ Lᴴ P
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let u = self.lu[(j, i)].conj();
                let zj = z[j];
                z[i] -= u * zj;
            }
            z[i] /= self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let l = self.lu[(j, i)].conj();
                let zj = z[j];
                z[i] -= l * zj;
            }
        }
        let mut x = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }

    /// Inverse iteration on `AᴴA` for the smallest singular value and its
    /// right vector. The estimate approaches `σ_min` from above.
    pub fn smallest_singular(&self, iterations: usize) -> (f64, Vec<Complex64>) {
        let n = self.lu.rows();
        let norm = |v: &[Complex64]| libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, 0.1 * libm::sin(i as f64 + 0.3))).collect();
        let nx = norm(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let mut sigma = f64::INFINITY;
        for _ in 0..iterations.max(1) {
            let y = self.solve_adjoint(&x);
            let z = self.solve(&y);
            let nz = norm(&z);
            if !nz.is_finite() || nz == 0.0 {
                return (0.0, x);
            }
            let next = 1.0 / libm::sqrt(nz);
            x = z.into_iter().map(|v| v / nz).collect();
            let done = libm::fabs(next - sigma) <= 1e-12 * next;
            sigma = next;
            if done {
                break;
            }
        }
        if self.min_pivot == 0.0 {
            sigma = 0.0;
        }
        (sigma, x)
    }
}
