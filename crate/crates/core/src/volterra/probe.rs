//! Least `‖XT − λTX‖` over witnesses normalized by a test functional.
//!
//! Minimizes `‖XT − λTX‖` subject to `⟨X x_m, y_k⟩ = 1` and `‖X‖ ≤ j`, where
//! `x_m`, `y_k` are the monomials `t^m`, `t^k` sampled at cell midpoints and
//! `⟨u, v⟩ = h Σ u_i conj(v_i)`. Both norms are the Frobenius norm divided
//! by `√N`, so the identity has norm 1 at every `N`.
//!
//! The constraint is `⟨C, X⟩_F = 1` with `C = h y xᴴ`. Writing
//! `X = X₀ + Z` with `X₀ = C/‖C‖²` and `Z ⊥ C` turns the problem into a
//! trust-region least-squares problem in `Z`, solved by CGLS truncated at
//! the boundary (Steihaug). The iterate path does not depend on `j` and its
//! norm grows monotonically, so the result is nonincreasing in `j`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{discretize_volterra, Scheme, VolterraDiscretization};
use crate::error::{Error, Result};
use crate::linalg::{fro_inner, CMatrix};

/// A square operator that can multiply matrices from either side.
pub trait SquareOperator {
    fn dim(&self) -> usize;
    /// `T X`.
    fn left_mul(&self, x: &CMatrix) -> CMatrix;
    /// `X T`.
    fn right_mul(&self, x: &CMatrix) -> CMatrix;
    /// `Tᴴ X`.
    fn left_mul_adjoint(&self, x: &CMatrix) -> CMatrix;
    /// `X Tᴴ`.
    fn right_mul_adjoint(&self, x: &CMatrix) -> CMatrix;
}

impl SquareOperator for CMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn left_mul(&self, x: &CMatrix) -> CMatrix {
        self.matmul(x)
    }

    fn right_mul(&self, x: &CMatrix) -> CMatrix {
        x.matmul(self)
    }

    fn left_mul_adjoint(&self, x: &CMatrix) -> CMatrix {
        self.adjoint().matmul(x)
    }

    fn right_mul_adjoint(&self, x: &CMatrix) -> CMatrix {
        x.matmul(&self.adjoint())
    }
}

/// Strict prefix/suffix sums make every product `O(N²)`. The trapezoid
/// matrix is `hS − (h/2)F + (h/2)D` with `S` strictly lower ones, `F` ones
/// at `(i, 0)` for `i ≥ 1` and `D = diag(0, 1, …, 1)`.
impl SquareOperator for VolterraDiscretization {
    fn dim(&self) -> usize {
        self.n
    }

    fn left_mul(&self, x: &CMatrix) -> CMatrix {
        let n = self.n;
        let h = self.h();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                out[(i, j)] = acc * h;
                acc += x[(i, j)];
            }
        }
        if self.scheme == Scheme::Trapezoid {
            for i in 1..n {
                for j in 0..n {
                    out[(i, j)] += (x[(i, j)] - x[(0, j)]) * (h / 2.0);
                }
            }
        }
        out
    }

    fn right_mul(&self, x: &CMatrix) -> CMatrix {
        let n = self.n;
        let h = self.h();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in (0..n).rev() {
                out[(i, j)] = acc * h;
                acc += x[(i, j)];
            }
        }
        if self.scheme == Scheme::Trapezoid {
            for i in 0..n {
                let tail: Complex64 = (1..n).map(|k| x[(i, k)]).sum();
                out[(i, 0)] -= tail * (h / 2.0);
                for j in 1..n {
                    out[(i, j)] += x[(i, j)] * (h / 2.0);
                }
            }
        }
        out
    }

    fn left_mul_adjoint(&self, x: &CMatrix) -> CMatrix {
        let n = self.n;
        let h = self.h();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in (0..n).rev() {
                out[(i, j)] = acc * h;
                acc += x[(i, j)];
            }
        }
        if self.scheme == Scheme::Trapezoid {
            for j in 0..n {
                let tail: Complex64 = (1..n).map(|k| x[(k, j)]).sum();
                out[(0, j)] -= tail * (h / 2.0);
                for i in 1..n {
                    out[(i, j)] += x[(i, j)] * (h / 2.0);
                }
            }
        }
        out
    }

    fn right_mul_adjoint(&self, x: &CMatrix) -> CMatrix {
        let n = self.n;
        let h = self.h();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                out[(i, j)] = acc * h;
                acc += x[(i, j)];
            }
        }
        if self.scheme == Scheme::Trapezoid {
            for i in 0..n {
                for j in 1..n {
                    out[(i, j)] += (x[(i, j)] - x[(i, 0)]) * (h / 2.0);
                }
            }
        }
        out
    }
}

/// `t^m` at the cell midpoints `(i + ½)/N`.
pub fn test_vector(n: usize, m: u32) -> Vec<f64> {
    (0..n).map(|i| libm::pow((i as f64 + 0.5) / n as f64, m as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    /// Stop once the projected gradient falls below `tol` times its
    /// initial size, or the normalized residual below `tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { tol: 1e-12, max_iter: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Gradient or residual below tolerance inside the ball.
    Converged,
    /// Stopped on the norm bound.
    Boundary,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub lambda: Complex64,
    pub m: u32,
    pub k: u32,
    pub j: f64,
    pub n: usize,
    /// `‖XT − λTX‖_F / √N` at the returned `X`.
    pub minimal_residual: f64,
    pub x: CMatrix,
    pub iterations: usize,
    pub termination: Termination,
    /// `(N, minimal residual)`; a single point unless built by [`probe_curve`].
    pub n_curve: Vec<(usize, f64)>,
}

fn sylvester<T: SquareOperator + ?Sized>(t: &T, x: &CMatrix, lambda: Complex64) -> CMatrix {
    t.right_mul(x).sub(&t.left_mul(x).scale(&lambda))
}

fn sylvester_adjoint<T: SquareOperator + ?Sized>(t: &T, r: &CMatrix, lambda: Complex64) -> CMatrix {
    t.right_mul_adjoint(r).sub(&t.left_mul_adjoint(r).scale(&lambda.conj()))
}

fn fro_sq(a: &CMatrix) -> f64 {
    a.data().iter().map(|z| z.norm_sqr()).sum()
}

pub fn constrained_residual_probe<T: SquareOperator + ?Sized>(
    t: &T,
    lambda: Complex64,
    m: u32,
    k: u32,
    j: f64,
    opts: &ProbeOptions,
) -> Result<ProbeResult> {
    let n = t.dim();
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::InvalidArgument("lambda must be finite".into()));
    }
    if !(j >= 1.0) || !j.is_finite() {
        return Err(Error::InvalidArgument(format!("norm bound must be finite and >= 1, got {}", j)));
    }
    let h = 1.0 / n as f64;
    let x = test_vector(n, m);
    let y = test_vector(n, k);
    let c = CMatrix::from_fn(n, n, |a, b| Complex64::new(h * y[a] * x[b], 0.0));
    let c_sq = fro_sq(&c);
    if !(c_sq > 0.0) || !c_sq.is_finite() {
        return Err(Error::Infeasible("test vectors are numerically zero".into()));
    }
    let x0 = c.scale(&Complex64::new(1.0 / c_sq, 0.0));
    let radius_sq = j * j * n as f64 - fro_sq(&x0);
    if radius_sq < 0.0 {
        return Err(Error::Infeasible(format!(
            "the constraint needs normalized norm {:.6e} > j = {}",
            libm::sqrt(fro_sq(&x0) / n as f64),
            j
        )));
    }
    let project = |z: &CMatrix| {
        let coef = fro_inner(&c, z) / c_sq;
        z.sub(&c.scale(&coef))
    };

    let mut z = CMatrix::zeros(n, n);
    let mut r = sylvester(t, &x0, lambda).scale(&Complex64::new(-1.0, 0.0));
    let mut s = project(&sylvester_adjoint(t, &r, lambda));
    let mut p = s.clone();
    let mut gamma = fro_sq(&s);
    let gamma0 = gamma;
    let scale_sq = n as f64;
    let mut termination = Termination::IterationLimit;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if fro_sq(&r) <= opts.tol * opts.tol * scale_sq || gamma <= opts.tol * opts.tol * gamma0 || gamma == 0.0 {
            termination = Termination::Converged;
            break;
        }
        iterations += 1;
        let q = sylvester(t, &p, lambda);
        let q_sq = fro_sq(&q);
        if q_sq == 0.0 {
            termination = Termination::Converged;
            break;
        }
        let alpha = gamma / q_sq;
        let next = z.add(&p.scale(&Complex64::new(alpha, 0.0)));
        if fro_sq(&next) > radius_sq {
            // largest τ with ‖z + τp‖² = radius²
            let pp = fro_sq(&p);
            let zp = fro_inner(&z, &p).re;
            let zz = fro_sq(&z);
            let tau = (-zp + libm::sqrt(zp * zp + pp * (radius_sq - zz))) / pp;
            z = z.add(&p.scale(&Complex64::new(tau, 0.0)));
            termination = Termination::Boundary;
            break;
        }
        z = next;
        r = r.sub(&q.scale(&Complex64::new(alpha, 0.0)));
        s = project(&sylvester_adjoint(t, &r, lambda));
        let gamma_next = fro_sq(&s);
        p = s.add(&p.scale(&Complex64::new(gamma_next / gamma, 0.0)));
        gamma = gamma_next;
    }
    let xs = x0.add(&z);
    let minimal_residual = libm::sqrt(fro_sq(&sylvester(t, &xs, lambda)) / n as f64);
    Ok(ProbeResult {
        lambda,
        m,
        k,
        j,
        n,
        minimal_residual,
        x: xs,
        iterations,
        termination,
        n_curve: alloc::vec![(n, minimal_residual)],
    })
}

/// The probe on `V_N` for each `N` in `n_list`.
pub fn probe_curve(
    lambda: Complex64,
    m: u32,
    k: u32,
    j: f64,
    n_list: &[usize],
    scheme: Scheme,
    opts: &ProbeOptions,
) -> Result<Vec<(usize, f64)>> {
    n_list
        .iter()
        .map(|&n| {
            let v = discretize_volterra(n, scheme)?;
            Ok((n, constrained_residual_probe(&v, lambda, m, k, j, opts)?.minimal_residual))
        })
        .collect()
}
