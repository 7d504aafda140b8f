//! Truncated eigenoperators `X e_n = λ^{-n} β(n−k+1, n) e_{n−k}`.
//!
//! Matrices are indexed by `[−W, W]`, row/column `i` standing for index
//! `i − W`; column `n` holds the image of `e_n`. Writing `x_{n,j}` for the
//! coefficient of `e_j` in `X e_n`, the relation `XT = λTX` reads
//! `w_n x_{n−1,j} = λ w_{j+1} x_{n,j+1}`.

use alloc::format;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lambda::Lambda;
use crate::linalg::{CMatrix, QMatrix};
use crate::matrix::DenseOperator;
use crate::scalar::ExactScalar;
use crate::weights::WeightFamily;

type Q = Complex<BigRational>;

fn q_from(s: &ExactScalar) -> Option<Q> {
    s.as_rational().map(|r| Complex::new(r.clone(), BigRational::zero()))
}

fn check_window(window: u64) -> Result<i64> {
    if window == 0 || window > 1 << 20 {
        return Err(Error::InvalidArgument(format!("window must be in 1..=2^20, got {}", window)));
    }
    Ok(window as i64)
}

/// `λ^e` over `Q(i)` for any integer `e`.
fn q_pow(lambda: &Q, e: i64) -> Q {
    let base = if e < 0 { Q::one() / lambda.clone() } else { lambda.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// The `(2W+1)²` truncation of the shift itself.
pub fn shift_matrix(family: &WeightFamily, window: u64) -> Result<DenseOperator> {
    family.validate()?;
    let w = check_window(window)?;
    let dim = (2 * w + 1) as usize;
    if family.is_exact() {
        let mut m = QMatrix::zeros(dim, dim);
        for n in -w + 1..=w {
            let v = family.eval(n)?;
            m[((n - 1 + w) as usize, (n + w) as usize)] = q_from(&v).ok_or(Error::InvalidFamily("inexact weight".into()))?;
        }
        Ok(DenseOperator::Exact(m))
    } else {
        let mut m = CMatrix::zeros(dim, dim);
        for n in -w + 1..=w {
            m[((n - 1 + w) as usize, (n + w) as usize)] = Complex64::new(family.eval(n)?.to_f64(), 0.0);
        }
        Ok(DenseOperator::Float(m))
    }
}

/// Builds the witness at index shift `k`. Exact when both the family and
/// λ are exact; otherwise entries are `exp(−n ln λ + ln β)` in floating point.
pub fn build_shift_witness(family: &WeightFamily, lambda: &Lambda, k: u64, window: u64) -> Result<DenseOperator> {
    family.validate()?;
    lambda.check_finite()?;
    if lambda.is_zero() {
        return Err(Error::InvalidArgument("the witness needs λ ≠ 0".into()));
    }
    let w = check_window(window)?;
    let k = k as i64;
    let dim = (2 * w + 1) as usize;
    let columns = (-w + k)..=w;
    match lambda.as_exact().filter(|_| family.is_exact()) {
        Some(lq) => {
            let mut m = QMatrix::zeros(dim, dim);
            for n in columns {
                let b = q_from(&family.beta(n - k + 1, n)?).ok_or(Error::InvalidFamily("inexact weight".into()))?;
                m[((n - k + w) as usize, (n + w) as usize)] = q_pow(&lq, -n) * b;
            }
            Ok(DenseOperator::Exact(m))
        }
        None => {
            let ln_lambda = Complex64::new(libm::log(lambda.modulus()), lambda.phase());
            let mut m = CMatrix::zeros(dim, dim);
            for n in columns {
                let ln_b = family.beta(n - k + 1, n)?.ln();
                m[((n - k + w) as usize, (n + w) as usize)] = (Complex64::new(ln_b, 0.0) - ln_lambda * n as f64).exp();
            }
            Ok(DenseOperator::Float(m))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwiningReport {
    /// Every interior recurrence holds (exactly, or to relative `1e-12`).
    pub exact_pass: bool,
    /// Whether the check ran in exact arithmetic.
    pub exact_arithmetic: bool,
    /// Frobenius norm of the recurrence defects, i.e. of `XT − λTX` on the
    /// entries whose four participants lie in the window.
    pub interior_residual: f64,
    pub checked: usize,
}

/// Checks `w_n x_{n−1,j} = λ w_{j+1} x_{n,j+1}` for `n ∈ [−W+1, W]`,
/// `j ∈ [−W, W−1]`.
pub fn verify_intertwining(x: &DenseOperator, family: &WeightFamily, lambda: &Lambda, window: u64) -> Result<IntertwiningReport> {
    family.validate()?;
    lambda.check_finite()?;
    let w = check_window(window)?;
    let dim = (2 * w + 1) as usize;
    if x.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: x.dim() });
    }
    let at = |row: i64, col: i64| ((row + w) as usize, (col + w) as usize);
    let mut checked = 0;
    let mut pass = true;
    let mut sum_sq = 0.0;
    if let (DenseOperator::Exact(m), Some(lq), true) = (x, lambda.as_exact(), family.is_exact()) {
        let weights: alloc::vec::Vec<Q> = (-w..=w)
            .map(|n| Ok(q_from(&family.eval(n)?).unwrap_or_else(Q::zero)))
            .collect::<Result<_>>()?;
        let wt = |n: i64| &weights[(n + w) as usize];
        for n in -w + 1..=w {
            for j in -w..w {
                let lhs = wt(n).clone() * m[at(j, n - 1)].clone();
                let rhs = lq.clone() * wt(j + 1).clone() * m[at(j + 1, n)].clone();
                checked += 1;
                if lhs != rhs {
                    pass = false;
                    let d = lhs - rhs;
                    sum_sq += crate::matrix::ratio_complex(&d).norm_sqr();
                }
            }
        }
        return Ok(IntertwiningReport { exact_pass: pass, exact_arithmetic: true, interior_residual: libm::sqrt(sum_sq), checked });
    }
    let m = x.to_float();
    let lam = lambda.to_complex();
    let weights: alloc::vec::Vec<f64> = (-w..=w).map(|n| Ok(family.eval(n)?.to_f64())).collect::<Result<_>>()?;
    let wt = |n: i64| weights[(n + w) as usize];
    for n in -w + 1..=w {
        for j in -w..w {
            let lhs = m[at(j, n - 1)] * wt(n);
            let rhs = lam * m[at(j + 1, n)] * wt(j + 1);
            checked += 1;
            let d = (lhs - rhs).norm();
            sum_sq += d * d;
            if d > 1e-12 * lhs.norm().max(rhs.norm()) {
                pass = false;
            }
        }
    }
    Ok(IntertwiningReport { exact_pass: pass, exact_arithmetic: false, interior_residual: libm::sqrt(sum_sq), checked })
}
