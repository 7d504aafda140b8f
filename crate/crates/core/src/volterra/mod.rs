//! The Volterra operator `(Vf)(x) = ∫_0^x f(t) dt` on `L²[0,1]` and its
//! discretizations on `N` cells of width `h = 1/N`.
//!
//! Witnesses for `λ ∈ (0, 1]` come from `C_a f(x) = f(ax)`, which satisfies
//! `C_a V = a V C_a`. For `λ > 1` the relation is transposed and conjugated
//! by the reflection `(Uf)(x) = f(1−x)`, using `U Vᵀ U = V`: with `a = 1/λ`,
//! `Y = U C_aᵀ U` gives `YV = λVY`. The rectangle matrix satisfies
//! `U V_Nᵀ U = V_N` exactly, so the discrete witnesses inherit the identity.

mod probe;

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lambda::Lambda;
use crate::linalg::{spectral_norm_power, CMatrix, QMatrix};
use crate::matrix::{matrix_sigma, DenseOperator, MatrixSigmaSet, DEFAULT_TOL};

pub use probe::{constrained_residual_probe, probe_curve, test_vector, ProbeOptions, ProbeResult, SquareOperator, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `h` strictly below the diagonal.
    Rectangle,
    /// Trapezoid weights: `h/2` at `(i, 0)` and `(i, i)` for `i ≥ 1`, `h`
    /// for `0 < j < i`, row 0 empty.
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolterraDiscretization {
    n: usize,
    scheme: Scheme,
}

impl VolterraDiscretization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Entry `(i, j)` as an exact rational.
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        let h = BigRational::new(BigInt::one(), BigInt::from(self.n));
        let half = || h.clone() / BigInt::from(2);
        match self.scheme {
            Scheme::Rectangle if j < i => h,
            Scheme::Trapezoid if i >= 1 && (j == 0 || j == i) => half(),
            Scheme::Trapezoid if j < i => h,
            _ => BigRational::zero(),
        }
    }

    pub fn to_exact(&self) -> QMatrix {
        QMatrix::from_fn(self.n, self.n, |i, j| Complex::new(self.entry(i, j), BigRational::zero()))
    }

    pub fn to_float(&self) -> CMatrix {
        let h = self.h();
        CMatrix::from_fn(self.n, self.n, |i, j| {
            let v = match self.scheme {
                Scheme::Rectangle if j < i => h,
                Scheme::Trapezoid if i >= 1 && (j == 0 || j == i) => h / 2.0,
                Scheme::Trapezoid if j < i => h,
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        })
    }

    /// The matrix as an exact operator.
    pub fn matrix(&self) -> DenseOperator {
        DenseOperator::Exact(self.to_exact())
    }
}

pub fn discretize_volterra(n: usize, scheme: Scheme) -> Result<VolterraDiscretization> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {}", n)));
    }
    Ok(VolterraDiscretization { n, scheme })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    /// `λ` or `1/λ` is `p/q` with `q | N`; only exact cell overlaps are used.
    GridExact,
    /// Any positive real λ; overlaps computed in floating point.
    Interpolating,
}

/// λ as a positive real, with its exact value when it has one.
fn positive_real(lambda: &Lambda) -> Result<(f64, Option<BigRational>)> {
    lambda.check_finite()?;
    let bad = || Error::InvalidArgument(format!("composition witnesses need a positive real λ, got {}", lambda));
    match lambda {
        Lambda::Rational { re, im } if im.is_zero() && re.is_positive() => Ok((crate::scalar::ratio_to_f64(re), Some(re.clone()))),
        Lambda::Polar { modulus, phase } if *phase == 0.0 && modulus.is_positive() => {
            Ok((crate::scalar::ratio_to_f64(modulus), Some(modulus.clone())))
        }
        Lambda::Float(z) if z.im == 0.0 && z.re > 0.0 => Ok((z.re, BigRational::from_float(z.re))),
        _ => Err(bad()),
    }
}

/// Averaging matrix of `f ↦ f(a·)` on `N` cells, `a = p/q ≤ 1`: row `i`
/// spreads over the source cells met by `[a·ih, a·(i+1)h)`.
fn dilation_exact(p: u64, q: u64, n: usize) -> CMatrix {
    let mut c = CMatrix::zeros(n, n);
    for i in 0..n as u64 {
        let (lo, hi) = (p * i, p * (i + 1));
        for j in lo / q..=(hi - 1) / q {
            let overlap = hi.min(q * (j + 1)) - lo.max(q * j);
            c[(i as usize, j as usize)] = Complex64::new(overlap as f64 / p as f64, 0.0);
        }
    }
    c
}

fn dilation_float(a: f64, n: usize) -> CMatrix {
    let mut c = CMatrix::zeros(n, n);
    for i in 0..n {
        let (lo, hi) = (a * i as f64, a * (i + 1) as f64);
        let first = libm::floor(lo) as usize;
        let last = (libm::ceil(hi) as usize).min(n);
        for j in first..last {
            let overlap = hi.min((j + 1) as f64) - lo.max(j as f64);
            if overlap > 0.0 {
                c[(i, j)] = Complex64::new(overlap / a, 0.0);
            }
        }
    }
    c
}

/// `U Cᵀ U`.
fn reflect_transpose(c: &CMatrix) -> CMatrix {
    let n = c.rows();
    CMatrix::from_fn(n, n, |i, j| c[(n - 1 - j, n - 1 - i)])
}

/// `X_λ` with `X_λ V_N ≈ λ V_N X_λ`.
pub fn composition_witness(lambda: &Lambda, n: usize, mode: WitnessMode) -> Result<CMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {}", n)));
    }
    let (value, exact) = positive_real(lambda)?;
    let reflected = value > 1.0;
    let c = match mode {
        WitnessMode::GridExact => {
            let r = exact.ok_or_else(|| Error::NotGridAligned { lambda: format!("{}", lambda), n })?;
            let a = if reflected { BigRational::one() / r } else { r };
            let (p, q) = (a.numer().to_u64(), a.denom().to_u64());
            let aligned = matches!(q, Some(q) if q > 0 && (n as u64) % q == 0);
            match (p, q) {
                (Some(p), Some(q)) if aligned && p.checked_mul(n as u64 + 1).is_some() => dilation_exact(p, q, n),
                _ => return Err(Error::NotGridAligned { lambda: format!("{}", lambda), n }),
            }
        }
        WitnessMode::Interpolating => dilation_float(if reflected { 1.0 / value } else { value }, n),
    };
    Ok(if reflected { reflect_transpose(&c) } else { c })
}

/// `‖XV − λVX‖₂ / ‖X‖₂`, zero when the residual matrix is exactly zero.
pub fn relative_residual(v: &VolterraDiscretization, x: &CMatrix, lambda: Complex64) -> f64 {
    let r = v.right_mul(x).sub(&v.left_mul(x).scale(&lambda));
    if r.is_zero() {
        return 0.0;
    }
    let norm = |m: &CMatrix| spectral_norm_power(|y| m.matvec(y), |y| m.adjoint_matvec(y), m.cols());
    norm(&r) / norm(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolterraEvidence {
    /// `(N, residual(N))`.
    pub residuals: Vec<(usize, f64)>,
    /// `−slope` of `ln residual` against `ln N`; `None` when a residual is zero.
    pub convergence_order: Option<f64>,
}

/// Least-squares slope of `y` against `x`.
pub fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Residuals of the grid-exact composition witness on rectangle `V_N`.
pub fn volterra_membership_evidence(lambda: &Lambda, n_list: &[usize]) -> Result<VolterraEvidence> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid sizes must be non-empty and strictly increasing".into()));
    }
    let (value, _) = positive_real(lambda)?;
    let mut residuals = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let x = composition_witness(lambda, n, WitnessMode::GridExact)?;
        let v = discretize_volterra(n, Scheme::Rectangle)?;
        residuals.push((n, relative_residual(&v, &x, Complex64::new(value, 0.0))));
    }
    let convergence_order = if residuals.len() >= 2 && residuals.iter().all(|r| r.1 > 0.0) {
        let pts: Vec<(f64, f64)> = residuals.iter().map(|&(n, r)| (libm::log(n as f64), libm::log(r))).collect();
        Some(-regression_slope(&pts))
    } else {
        None
    };
    Ok(VolterraEvidence { residuals, convergence_order })
}

/// `Σ(γI + V_N)` for rectangle `V_N`, exact when γ is a Gaussian rational.
pub fn shifted_volterra_sigma(gamma: &Lambda, n: usize) -> Result<MatrixSigmaSet> {
    gamma.check_finite()?;
    if gamma.is_zero() {
        return Err(Error::InvalidArgument("γ must be non-zero; γ = 0 is the plain Volterra operator".into()));
    }
    let v = discretize_volterra(n, Scheme::Rectangle)?;
    let op = match gamma.as_exact() {
        Some(g) => {
            let mut m = v.to_exact();
            for i in 0..n {
                m[(i, i)] = m[(i, i)].clone() + g.clone();
            }
            DenseOperator::Exact(m)
        }
        None => {
            let g = gamma.to_complex();
            DenseOperator::Float(v.to_float().add(&CMatrix::identity(n).scale(&g)))
        }
    };
    matrix_sigma(&op, DEFAULT_TOL)
}
