//! Dense matrices over `Complex64` and over Gaussian rationals, with the few
//! factorizations the Σ computations need.

mod eig;
mod exact;
mod lu;
mod poly;
mod svd;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::ratio_to_f64;

pub use eig::{eigenvalues, schur};
pub use exact::{exact_kernel_vector, exact_rank};
pub use lu::Lu;
pub use poly::{charpoly_exact, exact_distinct_eigenvalues, simple_roots, square_free_part};
pub use svd::{smallest_singular_triplet, svd_jacobi, Svd};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMatrix = Matrix<Complex64>;
/// Matrix over `Q(i)`.
pub type QMatrix = Matrix<Complex<BigRational>>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Plain triple loop; skips zero left factors, which keeps sparse
    /// rational products cheap.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let slot = &mut out.data[i * rhs.cols + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    /// Upper triangular (zeros strictly below the diagonal)?
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..e {
            out = out.matmul(self);
        }
        out
    }
}

impl<T: Clone + Zero + One + core::ops::Sub<Output = T>> Matrix<T> {
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Matrix::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Matrix::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::zero() })
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn fro_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for (j, a) in self.row(i).iter().enumerate() {
                out[j] += a.conj() * xi;
            }
        }
        out
    }

    /// Spectral norm. Jacobi SVD for small matrices, power iteration on
    /// `AᴴA` otherwise.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        if self.rows.max(self.cols) <= 48 {
            return svd_jacobi(self).singular_values.first().copied().unwrap_or(0.0);
        }
        spectral_norm_power(|x| self.matvec(x), |y| self.adjoint_matvec(y), self.cols)
    }
}

/// Largest singular value of an implicit operator by power iteration on
/// `AᴴA`, stopped when the estimate changes by less than `1e-13` relatively.
pub fn spectral_norm_power(
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    apply_adjoint: impl Fn(&[Complex64]) -> Vec<Complex64>,
    n: usize,
) -> f64 {
    // deterministic start with components in every direction
    let mut x: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(1.0 + 0.5 * libm::sin(1.0 + i as f64 * 0.7), 0.25 * libm::cos(i as f64))).collect();
    let norm = |v: &[Complex64]| libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let nx = norm(&x);
    x.iter_mut().for_each(|z| *z /= nx);
    let mut estimate = 0.0f64;
    for _ in 0..2000 {
        let y = apply(&x);
        let ny = norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        let z = apply_adjoint(&y);
        let nz = norm(&z);
        let next = libm::sqrt(nz);
        x = z.into_iter().map(|v| v / nz).collect();
        let previous = estimate;
        estimate = ny.max(next);
        if libm::fabs(estimate - previous) <= 1e-13 * estimate {
            break;
        }
    }
    estimate
}

impl QMatrix {
    pub fn from_rationals(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        Matrix::from_vec(rows, cols, data.into_iter().map(|r| Complex::new(r, BigRational::zero())).collect())
    }

    pub fn to_float(&self) -> CMatrix {
        self.map(|z| Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im)))
    }
}

/// Frobenius inner product `Σ conj(a_ij) b_ij`.
pub fn fro_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum()
}
