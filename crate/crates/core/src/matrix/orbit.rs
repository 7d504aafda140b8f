//! Seeded sampling of similarity orbits `{G T G⁻¹}`.
//!
//! `G = Q₁ diag(s) Q₂ᵀ` with `Q₁, Q₂` Haar-distributed real orthogonal
//! matrices (Gram–Schmidt of a Gaussian matrix) and `ln s_i` uniform on
//! `[−½ ln c, ½ ln c]`, so `cond(G) ≤ c` by construction; the measured
//! condition number is still checked and out-of-range draws are rejected.
//! Sample `i` is drawn from ChaCha8 stream `i` of the seed, so samples are
//! independent of evaluation order.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::DenseOperator;
use crate::error::{Error, Result};
use crate::linalg::{svd_jacobi, CMatrix};

/// Draws per sample before giving up.
pub const REJECTION_BUDGET: usize = 64;

/// An invertible `G` together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugator {
    pub g: CMatrix,
    pub g_inv: CMatrix,
    pub cond: f64,
}

impl Conjugator {
    pub fn identity(dim: usize) -> Self {
        Conjugator { g: CMatrix::identity(dim), g_inv: CMatrix::identity(dim), cond: 1.0 }
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let g = CMatrix::from_fn(n, n, |i, j| Complex64::new(if perm[j] == i { 1.0 } else { 0.0 }, 0.0));
        let g_inv = g.transpose();
        Conjugator { g, g_inv, cond: 1.0 }
    }
}

/// `G T G⁻¹`, always in floating point.
pub fn conjugate(t: &DenseOperator, c: &Conjugator) -> DenseOperator {
    DenseOperator::Float(c.g.matmul(&t.to_float()).matmul(&c.g_inv))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedSampler {
    dim: usize,
    cond_max: f64,
    seed: u64,
}

impl ConditionedSampler {
    pub fn new(dim: usize, cond_max: f64, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if !(cond_max > 1.0) || !cond_max.is_finite() {
            return Err(Error::InvalidArgument(format!("condition bound must be finite and > 1, got {}", cond_max)));
        }
        Ok(ConditionedSampler { dim, cond_max, seed })
    }

    /// The `index`-th conjugator of this seed.
    pub fn draw(&self, index: u64) -> Result<Conjugator> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let half_log = 0.5 * libm::log(self.cond_max);
        for _ in 0..REJECTION_BUDGET {
            let q1 = haar_orthogonal(self.dim, &mut rng);
            let q2 = haar_orthogonal(self.dim, &mut rng);
            let s: Vec<f64> = (0..self.dim).map(|_| libm::exp(half_log * (2.0 * uniform(&mut rng) - 1.0))).collect();
            let g = CMatrix::from_fn(self.dim, self.dim, |i, j| {
                Complex64::new((0..self.dim).map(|k| q1[(i, k)].re * s[k] * q2[(j, k)].re).sum(), 0.0)
            });
            let g_inv = CMatrix::from_fn(self.dim, self.dim, |i, j| {
                Complex64::new((0..self.dim).map(|k| q2[(i, k)].re * q1[(j, k)].re / s[k]).sum(), 0.0)
            });
            let sv = svd_jacobi(&g).singular_values;
            let cond = sv[0] / sv[self.dim - 1];
            if cond.is_finite() && cond <= self.cond_max {
                return Ok(Conjugator { g, g_inv, cond });
            }
        }
        Err(Error::RejectionBudget(REJECTION_BUDGET))
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; 1 − u keeps the logarithm finite
    let u = 1.0 - uniform(rng);
    let v = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * core::f64::consts::PI * v)
}

/// Modified Gram–Schmidt on a Gaussian matrix. The implied `R` has a
/// positive diagonal, which makes the result Haar distributed.
fn haar_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
        let mut ok = true;
        for j in 0..n {
            for p in 0..j {
                let dot: f64 = (0..n).map(|i| cols[p][i] * cols[j][i]).sum();
                for i in 0..n {
                    cols[j][i] -= dot * cols[p][i];
                }
            }
            let norm = libm::sqrt(cols[j].iter().map(|x| x * x).sum::<f64>());
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= norm);
        }
        if ok {
            return CMatrix::from_fn(n, n, |i, j| Complex64::new(cols[j][i], 0.0));
        }
    }
}

/// `count` conjugates `G T G⁻¹` with `cond(G) ≤ cond_max`.
pub fn sample_similarity_orbit(t: &DenseOperator, count: usize, cond_max: f64, seed: u64) -> Result<Vec<DenseOperator>> {
    t.validate()?;
    let sampler = ConditionedSampler::new(t.dim(), cond_max, seed)?;
    (0..count as u64).map(|i| Ok(conjugate(t, &sampler.draw(i)?))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDistance {
    /// Best `‖G A G⁻¹ − B‖₂` found; an upper bound on the orbit distance.
    pub distance: f64,
    /// Running minimum after each sample.
    pub curve: Vec<f64>,
}

/// Lexicographic permutations of `0..n`, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap_or(i + 1);
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Largest dimension whose permutation matrices head the search stream.
pub const PERMUTATION_HEAD_MAX_DIM: usize = 5;

/// Searches `G` over a stream that starts with the identity (and, up to
/// dimension 5, every permutation matrix) and continues with seeded random
/// conjugators.
pub fn orbit_distance(a: &DenseOperator, b: &DenseOperator, samples: usize, cond_max: f64, seed: u64) -> Result<OrbitDistance> {
    a.validate()?;
    b.validate()?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let n = a.dim();
    let sampler = ConditionedSampler::new(n, cond_max, seed)?;
    let head: Vec<Conjugator> = if n <= PERMUTATION_HEAD_MAX_DIM {
        permutations(n).iter().map(|p| Conjugator::permutation(p)).collect()
    } else {
        alloc::vec![Conjugator::identity(n)]
    };
    let bf = b.to_float();
    let mut best = f64::INFINITY;
    let mut curve = Vec::with_capacity(samples);
    for i in 0..samples {
        let c = match head.get(i) {
            Some(c) => c.clone(),
            None => sampler.draw((i - head.len()) as u64)?,
        };
        let d = conjugate(a, &c).to_float().sub(&bf).spectral_norm();
        best = best.min(d);
        curve.push(best);
    }
    Ok(OrbitDistance { distance: best, curve })
}
