//! Extended eigenvalues of finite matrices.
//!
//! In finite dimensions `XT = λTX` has a non-zero solution exactly when the
//! map `X ↦ XT − λTX` is singular. Triangularizing `T = QRQᴴ` turns the map
//! into one whose eigenvalues are `μ_j − λ μ_i` over pairs of eigenvalues of
//! `T`, so
//!
//! * if `0 ∈ σ(T)` every λ works and `Σ(T) = C`;
//! * otherwise `Σ(T) = {μ/ν : μ, ν ∈ σ(T)}`, which always contains 1.
//!
//! [`matrix_sigma`] applies that rule; [`sylvester_membership`] checks a
//! single λ independently through the null space of the `n² × n²` map.

mod orbit;

use alloc::format;
use alloc::vec::Vec;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lambda::Lambda;
use crate::linalg::{
    eigenvalues, exact_distinct_eigenvalues, exact_kernel_vector, exact_rank, schur, smallest_singular_triplet, CMatrix, Lu, Matrix, QMatrix,
};
use crate::scalar::ratio_to_f64;

pub use orbit::{
    conjugate, orbit_distance, sample_similarity_orbit, Conjugator, ConditionedSampler, OrbitDistance,
};

/// Relative clustering tolerance for eigenvalue ratios.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest `n²` for the dense Sylvester oracle.
pub const DEFAULT_DENSE_CAP: usize = 4096;
/// Largest `n²` for the exact rational oracle.
pub const DEFAULT_EXACT_CAP: usize = 64;

/// A finite operator, either over `Complex64` or exactly over `Q(i)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DenseOperator {
    Float(CMatrix),
    Exact(QMatrix),
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        match self {
            DenseOperator::Float(m) => m.rows(),
            DenseOperator::Exact(m) => m.rows(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DenseOperator::Exact(_))
    }

    pub fn to_float(&self) -> CMatrix {
        match self {
            DenseOperator::Float(m) => m.clone(),
            DenseOperator::Exact(m) => m.to_float(),
        }
    }

    pub fn as_exact(&self) -> Option<&QMatrix> {
        match self {
            DenseOperator::Exact(m) => Some(m),
            DenseOperator::Float(_) => None,
        }
    }

    pub fn from_rationals(dim: usize, entries: Vec<BigRational>) -> Self {
        DenseOperator::Exact(QMatrix::from_rationals(dim, dim, entries))
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        DenseOperator::Float(CMatrix::from_real(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator::Exact(QMatrix::identity(dim))
    }

    /// Exact diagonal matrix.
    pub fn diagonal(values: &[BigRational]) -> Self {
        let n = values.len();
        DenseOperator::Exact(Matrix::from_fn(n, n, |i, j| {
            let v = if i == j { values[i].clone() } else { BigRational::zero() };
            Complex::new(v, BigRational::zero())
        }))
    }

    /// Single nilpotent Jordan block with ones on the superdiagonal.
    pub fn jordan_nilpotent(dim: usize) -> Self {
        DenseOperator::Exact(Matrix::from_fn(dim, dim, |i, j| {
            let v = if j == i + 1 { BigRational::one() } else { BigRational::zero() };
            Complex::new(v, BigRational::zero())
        }))
    }

    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = match self {
            DenseOperator::Float(m) => (m.rows(), m.cols()),
            DenseOperator::Exact(m) => (m.rows(), m.cols()),
        };
        if rows == 0 || rows != cols {
            return Err(Error::InvalidArgument(format!("operator must be square and non-empty, got {}x{}", rows, cols)));
        }
        if let DenseOperator::Float(m) = self {
            if !m.is_finite() {
                return Err(Error::InvalidArgument("operator has non-finite entries".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaKind {
    AllOfC,
    FiniteSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSigmaSet {
    pub kind: SigmaKind,
    /// Cluster representatives ordered by `(|z|, arg z)`; empty for `AllOfC`.
    pub values: Vec<Complex64>,
    pub tolerance: f64,
}

impl MatrixSigmaSet {
    pub fn contains(&self, z: Complex64) -> bool {
        match self.kind {
            SigmaKind::AllOfC => true,
            SigmaKind::FiniteSet => self.values.iter().any(|v| close(*v, z, self.tolerance)),
        }
    }

    /// Same kind and pairwise-close values.
    pub fn approx_eq(&self, other: &MatrixSigmaSet, tol: f64) -> bool {
        self.kind == other.kind
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| close(*a, *b, tol))
    }
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// Orders by modulus, then argument in `[0, 2π)`.
pub fn polar_order(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    let arg = |z: &Complex64| {
        let t = z.arg();
        if t < 0.0 {
            t + 2.0 * core::f64::consts::PI
        } else {
            t
        }
    };
    a.norm().total_cmp(&b.norm()).then(arg(a).total_cmp(&arg(b)))
}

/// Merges values within relative distance `tol`. A cluster holding exactly
/// `1` is represented by `1`; otherwise by the mean of its members.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(polar_order);
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for z in sorted {
        match clusters.iter_mut().find(|(rep, _)| close(*rep, z, tol)) {
            Some((_, members)) => members.push(z),
            None => clusters.push((z, alloc::vec![z])),
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut reps: Vec<Complex64> = clusters
        .into_iter()
        .map(|(_, members)| {
            if members.contains(&one) {
                one
            } else {
                members.iter().sum::<Complex64>() / members.len() as f64
            }
        })
        .collect();
    reps.sort_by(polar_order);
    reps
}

fn float_singular(t: &CMatrix, tol: f64) -> bool {
    let scale = t.max_abs().max(1.0);
    if t.is_upper_triangular() || t.is_lower_triangular() {
        return (0..t.rows()).any(|i| t[(i, i)].norm() <= tol * scale);
    }
    let smin = if t.rows() <= 64 {
        smallest_singular_triplet(t).0
    } else {
        Lu::new(t).smallest_singular(200).0
    };
    smin <= tol * t.spectral_norm().max(f64::MIN_POSITIVE)
}

/// `Σ(T)` by the eigenvalue-ratio rule.
///
/// `tol` is both the threshold for a zero eigenvalue (relative to the largest
/// entry, at least 1) and the relative clustering tolerance for ratios.
/// Exact operators decide singularity by exact rank and, up to dimension
/// 64, take their spectrum from the exact characteristic polynomial, so
/// defective eigenvalues do not split; triangular operators read the
/// spectrum off the diagonal.
pub fn matrix_sigma(t: &DenseOperator, tol: f64) -> Result<MatrixSigmaSet> {
    t.validate()?;
    let n = t.dim();
    let singular = match t {
        DenseOperator::Exact(q) => exact_rank(q) < n,
        DenseOperator::Float(f) => float_singular(f, tol),
    };
    let all = MatrixSigmaSet { kind: SigmaKind::AllOfC, values: Vec::new(), tolerance: tol };
    if singular {
        return Ok(all);
    }
    let f = t.to_float();
    let spectrum = match t {
        DenseOperator::Exact(q) if n <= DEFAULT_EXACT_CAP => exact_distinct_eigenvalues(q)?,
        _ => eigenvalues(&f)?,
    };
    let scale = f.max_abs().max(1.0);
    if spectrum.iter().any(|mu| mu.norm() <= tol * scale) {
        return Ok(all);
    }
    let distinct = cluster(&spectrum, tol);
    let mut ratios = Vec::with_capacity(distinct.len() * distinct.len());
    for mu in &distinct {
        for nu in &distinct {
            ratios.push(if mu == nu { Complex64::new(1.0, 0.0) } else { mu / nu });
        }
    }
    Ok(MatrixSigmaSet { kind: SigmaKind::FiniteSet, values: cluster(&ratios, tol), tolerance: tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SylvesterOptions {
    pub tol: f64,
    pub dense_cap: usize,
    pub exact_cap: usize,
}

impl Default for SylvesterOptions {
    fn default() -> Self {
        SylvesterOptions { tol: DEFAULT_TOL, dense_cap: DEFAULT_DENSE_CAP, exact_cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleRoute {
    /// `T` nilpotent; witness is the last non-zero power of `T`.
    Nilpotent,
    /// Fraction-free elimination over `Q(i)`.
    ExactRank,
    /// Jacobi SVD of the explicit `n² × n²` map.
    DenseSvd,
    /// Inverse iteration through the Schur form of `T`; approximate.
    Iterative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterOutcome {
    pub status: Membership,
    /// Normalized to unit spectral norm.
    pub witness: Option<DenseOperator>,
    /// Smallest singular value of the float map (`NaN` when not computed).
    pub smin: f64,
    pub route: OracleRoute,
}

impl SylvesterOutcome {
    pub fn is_approximate(&self) -> bool {
        self.route == OracleRoute::Iterative
    }
}

/// The matrix of `X ↦ XT − λTX` on row-major `vec(X)`.
pub fn sylvester_map(t: &CMatrix, lambda: Complex64) -> CMatrix {
    let n = t.rows();
    let mut l = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for b in 0..n {
                l[(row, i * n + b)] += t[(b, j)];
            }
            for a in 0..n {
                l[(row, a * n + j)] -= lambda * t[(i, a)];
            }
        }
    }
    l
}

pub fn sylvester_map_exact(t: &QMatrix, lambda: &Complex<BigRational>) -> QMatrix {
    let n = t.rows();
    let mut l = QMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for b in 0..n {
                let v = l[(row, i * n + b)].clone() + t[(b, j)].clone();
                l[(row, i * n + b)] = v;
            }
            for a in 0..n {
                let v = l[(row, a * n + j)].clone() - lambda.clone() * t[(i, a)].clone();
                l[(row, a * n + j)] = v;
            }
        }
    }
    l
}

/// Largest `m` with `Tᵐ ≠ 0` when `T` is nilpotent.
fn nilpotent_index(t: &DenseOperator, tol: f64) -> Option<(usize, DenseOperator)> {
    let n = t.dim();
    match t {
        DenseOperator::Exact(q) => {
            let mut power = QMatrix::identity(n);
            for m in 0..=n {
                let next = power.matmul(q);
                if next.is_zero() {
                    return Some((m, DenseOperator::Exact(power)));
                }
                power = next;
            }
            None
        }
        DenseOperator::Float(f) => {
            let norm = f.fro_norm();
            let negligible = |p: &CMatrix, m: usize| p.fro_norm() <= tol * libm::pow(norm.max(1.0), m as f64);
            let mut power = CMatrix::identity(n);
            for m in 0..=n {
                let next = power.matmul(f);
                if next.is_zero() || negligible(&next, m + 1) {
                    return Some((m, DenseOperator::Float(power)));
                }
                power = next;
            }
            None
        }
    }
}

fn normalize_witness(x: &CMatrix) -> CMatrix {
    let s = x.spectral_norm();
    if s == 0.0 {
        x.clone()
    } else {
        x.map(|z| z / s)
    }
}

fn reshape(n: usize, v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// Decides `λ ∈ Σ(T)` through the null space of `X ↦ XT − λTX`.
///
/// Routes, in order: nilpotent `T` (witness `Tᵐ` for the last non-zero
/// power), exact rank when `T` and `λ` are Gaussian rationals and
/// `n² ≤ exact_cap`, dense Jacobi SVD when `n² ≤ dense_cap`, otherwise
/// inverse iteration through the Schur form (approximate).
pub fn sylvester_membership(t: &DenseOperator, lambda: &Lambda, opts: &SylvesterOptions) -> Result<SylvesterOutcome> {
    t.validate()?;
    lambda.check_finite()?;
    let n = t.dim();
    let lam = lambda.to_complex();
    let tf = t.to_float();
    let dense = n * n <= opts.dense_cap;
    let float_smin = |with_vector: bool| -> Result<(f64, Option<CMatrix>)> {
        if dense {
            let (s, v) = smallest_singular_triplet(&sylvester_map(&tf, lam));
            Ok((s, with_vector.then(|| reshape(n, &v))))
        } else {
            let (s, x) = schur_inverse_iteration(&tf, lam)?;
            Ok((s, with_vector.then_some(x)))
        }
    };

    if let Some((_, power)) = nilpotent_index(t, opts.tol) {
        let smin = if dense { float_smin(false)?.0 } else { f64::NAN };
        let witness = match power {
            DenseOperator::Exact(q) => DenseOperator::Exact(q),
            DenseOperator::Float(f) => DenseOperator::Float(normalize_witness(&f)),
        };
        return Ok(SylvesterOutcome { status: Membership::In, witness: Some(witness), smin, route: OracleRoute::Nilpotent });
    }

    if let (DenseOperator::Exact(q), Some(lx)) = (t, lambda.as_exact()) {
        if n * n <= opts.exact_cap {
            let map = sylvester_map_exact(q, &lx);
            let smin = if dense { float_smin(false)?.0 } else { f64::NAN };
            let outcome = match exact_kernel_vector(&map) {
                Some(v) => {
                    debug_assert!(exact_rank(&map) < n * n);
                    let x = QMatrix::from_vec(n, n, v);
                    SylvesterOutcome {
                        status: Membership::In,
                        witness: Some(DenseOperator::Float(normalize_witness(&x.to_float()))),
                        smin,
                        route: OracleRoute::ExactRank,
                    }
                }
                None => SylvesterOutcome { status: Membership::Out, witness: None, smin, route: OracleRoute::ExactRank },
            };
            return Ok(outcome);
        }
    }

    let (smin, x) = float_smin(true)?;
    let threshold = opts.tol * tf.spectral_norm();
    let status = if smin <= threshold { Membership::In } else { Membership::Out };
    let witness = match status {
        Membership::In => x.map(|x| DenseOperator::Float(normalize_witness(&x))),
        Membership::Out => None,
    };
    Ok(SylvesterOutcome {
        status,
        witness,
        smin,
        route: if dense { OracleRoute::DenseSvd } else { OracleRoute::Iterative },
    })
}

/// Inverse iteration on `L*L` for `L(X) = XT − λTX`, solving with `L` and
/// `L*` by substitution in the Schur basis of `T`.
fn schur_inverse_iteration(t: &CMatrix, lambda: Complex64) -> Result<(f64, CMatrix)> {
    let n = t.rows();
    let (q, r) = schur(t)?;
    let qh = q.adjoint();
    let floor = f64::EPSILON * r.max_abs().max(f64::MIN_POSITIVE);
    let guard = |d: Complex64| if d.norm() < floor { Complex64::new(floor, 0.0) } else { d };
    // Y R − λ R Y = C, R upper triangular
    let solve = |c: &CMatrix| -> CMatrix {
        let c = qh.matmul(c).matmul(&q);
        let mut y = CMatrix::zeros(n, n);
        for i in (0..n).rev() {
            for j in 0..n {
                let mut acc = c[(i, j)];
                for k in 0..j {
                    acc -= y[(i, k)] * r[(k, j)];
                }
                for k in i + 1..n {
                    acc += lambda * r[(i, k)] * y[(k, j)];
                }
                y[(i, j)] = acc / guard(r[(j, j)] - lambda * r[(i, i)]);
            }
        }
        q.matmul(&y).matmul(&qh)
    };
    // W Rᴴ − conj(λ) Rᴴ W = C
    let solve_adjoint = |c: &CMatrix| -> CMatrix {
        let c = qh.matmul(c).matmul(&q);
        let lc = lambda.conj();
        let mut w = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in (0..n).rev() {
                let mut acc = c[(i, j)];
                for k in j + 1..n {
                    acc -= w[(i, k)] * r[(j, k)].conj();
                }
                for k in 0..i {
                    acc += lc * r[(k, i)].conj() * w[(k, j)];
                }
                w[(i, j)] = acc / guard(r[(j, j)].conj() - lc * r[(i, i)].conj());
            }
        }
        q.matmul(&w).matmul(&qh)
    };
    let mut x = CMatrix::from_fn(n, n, |i, j| Complex64::new(1.0 + 0.1 * libm::sin((i * n + j) as f64), 0.0));
    let nx = x.fro_norm();
    x = x.map(|z| z / nx);
    let mut sigma = f64::INFINITY;
    for _ in 0..200 {
        let z = solve(&solve_adjoint(&x));
        let nz = z.fro_norm();
        if !nz.is_finite() || nz == 0.0 {
            return Ok((0.0, x));
        }
        let next = 1.0 / libm::sqrt(nz);
        x = z.map(|v| v / nz);
        let done = libm::fabs(next - sigma) <= 1e-12 * next;
        sigma = next;
        if done {
            break;
        }
    }
    Ok((sigma, x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResidual {
    /// `‖XT − λTX‖₂`.
    pub residual: f64,
    /// `‖X‖₂`.
    pub xnorm: f64,
    /// `X = 0` is never a valid witness.
    pub zero_witness: bool,
    /// Residual computed exactly over `Q(i)`.
    pub exact: bool,
}

pub fn witness_residual(t: &DenseOperator, x: &DenseOperator, lambda: &Lambda) -> Result<WitnessResidual> {
    t.validate()?;
    x.validate()?;
    lambda.check_finite()?;
    if t.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: x.dim() });
    }
    if let (DenseOperator::Exact(tq), DenseOperator::Exact(xq), Some(lq)) = (t, x, lambda.as_exact()) {
        let r = xq.matmul(tq).sub(&tq.matmul(xq).scale(&lq));
        let residual = if r.is_zero() { 0.0 } else { r.to_float().spectral_norm() };
        let zero_witness = xq.is_zero();
        let xnorm = if zero_witness { 0.0 } else { xq.to_float().spectral_norm() };
        return Ok(WitnessResidual { residual, xnorm, zero_witness, exact: true });
    }
    let tf = t.to_float();
    let xf = x.to_float();
    let lam = lambda.to_complex();
    let r = xf.matmul(&tf).sub(&tf.matmul(&xf).scale(&lam));
    let xnorm = xf.spectral_norm();
    Ok(WitnessResidual { residual: r.spectral_norm(), xnorm, zero_witness: xnorm == 0.0, exact: false })
}

/// Exact `Q(i)` copy of a float operator's entries when they are all dyadic.
pub fn rationalize(m: &CMatrix) -> Option<QMatrix> {
    let data: Option<Vec<_>> = m
        .data()
        .iter()
        .map(|z| Some(Complex::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?)))
        .collect();
    Some(QMatrix::from_vec(m.rows(), m.cols(), data?))
}

pub(crate) fn ratio_complex(z: &Complex<BigRational>) -> Complex64 {
    Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im))
}
