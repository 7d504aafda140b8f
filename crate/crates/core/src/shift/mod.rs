//! Bilateral weighted shifts `T e_n = w_n e_{n-1}`.
//!
//! `λ ≠ 0` is an extended eigenvalue iff for some `k ≥ 0` the sequence
//! `s_n = |λ|^{-n} β(n−k+1, n)` is bounded over `n ∈ Z`; `0` never is.
//! Along an exponential tail `w_n = b^|n|` the product of `k` consecutive
//! weights grows like `(b^k)^|n|`, along polynomial or constant tails it is
//! subexponential. So for `r = |λ|`:
//!
//! * `n → +∞` is bounded iff `r ≥ b₊^k` (exponential tail) or `r ≥ 1`;
//! * `n → −∞` is bounded iff `r ≤ b₋^{-k}` (exponential tail) or `r ≤ 1`.
//!
//! Equality is included in both cases: at the critical modulus the
//! remaining factor is constant or polynomially decaying.

mod annulus;
mod norms;
mod witness;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lambda::Lambda;
use crate::scalar::{ln_ratio, ratio_pow};
use crate::weights::{TailClass, WeightFamily};

pub use annulus::{annulus, AnnulusReport, AnnulusShape, Radius};
pub use norms::{
    argmax_beta, harmonic_norm_closed_form, power_norm, quasinilpotence_profile, required_window, NormProfile,
    ProfileBasis, DEFAULT_QN_THRESHOLD,
};
pub use witness::{build_shift_witness, shift_matrix, verify_intertwining, IntertwiningReport};

pub const DEFAULT_KMAX: u64 = 20;
pub const DEFAULT_HORIZON: u64 = 10_000;
/// Regression slopes of `ln s_n` below this magnitude are undecided.
pub const TAU_SLOPE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    In,
    Out,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaVerdict {
    pub status: Status,
    /// Least `k` with a bounded sequence (Analytic), or the least `k` the
    /// regression found decisively bounded (Sampled).
    pub witness_k: Option<u64>,
    pub mode: Mode,
    pub detail: String,
}

/// Relative tolerance for modulus comparisons when λ is a plain float.
const FLOAT_MODULUS_TOL: f64 = 1e-12;

/// Compares `|λ|` with `base^e`.
fn cmp_modulus(lambda: &Lambda, base: &BigRational, e: i64) -> Ordering {
    if let Some(r2) = lambda.modulus_sq_exact() {
        if e.unsigned_abs() <= 100_000 {
            let p = ratio_pow(base, 2 * e.unsigned_abs());
            let target = if e >= 0 { p } else { BigRational::one() / p };
            return r2.cmp(&target);
        }
    }
    let lhs = libm::log(lambda.modulus());
    let rhs = e as f64 * ln_ratio(base);
    if libm::fabs(lhs - rhs) <= FLOAT_MODULUS_TOL * lhs.abs().max(rhs.abs()).max(1.0) {
        Ordering::Equal
    } else {
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
    }
}

/// Least `k ≥ 0` with `|λ| ≥ base^k` (`base < 1`), given `|λ| < 1`.
fn least_k_above(lambda: &Lambda, base: &BigRational) -> u64 {
    let estimate = libm::ceil(libm::log(lambda.modulus()) / ln_ratio(base));
    let mut k = if estimate.is_finite() && estimate > 0.0 { estimate as i64 } else { 0 };
    while k > 0 && cmp_modulus(lambda, base, k - 1) != Ordering::Less {
        k -= 1;
    }
    while cmp_modulus(lambda, base, k) == Ordering::Less {
        k += 1;
    }
    k as u64
}

/// Least `k ≥ 0` with `|λ| ≤ base^{-k}` (`base < 1`), given `|λ| > 1`.
fn least_k_below(lambda: &Lambda, base: &BigRational) -> u64 {
    let estimate = libm::ceil(-libm::log(lambda.modulus()) / ln_ratio(base));
    let mut k = if estimate.is_finite() && estimate > 0.0 { estimate as i64 } else { 0 };
    while k > 0 && cmp_modulus(lambda, base, -(k - 1)) != Ordering::Greater {
        k -= 1;
    }
    while cmp_modulus(lambda, base, -k) == Ordering::Greater {
        k += 1;
    }
    k as u64
}

/// Decides `λ ∈ Σ(T)`.
pub fn shift_membership(family: &WeightFamily, lambda: &Lambda, k_max: u64, mode: Mode) -> Result<SigmaVerdict> {
    match mode {
        Mode::Analytic => analytic_membership(family, lambda, k_max),
        Mode::Sampled => sampled_membership(family, lambda, k_max, DEFAULT_HORIZON),
    }
}

fn analytic_membership(family: &WeightFamily, lambda: &Lambda, k_max: u64) -> Result<SigmaVerdict> {
    family.validate()?;
    lambda.check_finite()?;
    let verdict = |status, witness_k, detail: String| SigmaVerdict { status, witness_k, mode: Mode::Analytic, detail };
    if lambda.is_zero() {
        return Ok(verdict(Status::Out, None, "zero is never an extended eigenvalue".into()));
    }
    let growth = family.growth_descriptor()?;
    let one = BigRational::one();
    let vs_one = cmp_modulus(lambda, &one, 0);

    let plus_k = match &growth.plus {
        TailClass::Exponential { base } if vs_one == Ordering::Less => Some(least_k_above(lambda, base)),
        _ if vs_one == Ordering::Less => None,
        _ => Some(0),
    };
    let minus_k = match &growth.minus {
        TailClass::Exponential { base } if vs_one == Ordering::Greater => Some(least_k_below(lambda, base)),
        _ if vs_one == Ordering::Greater => None,
        _ => Some(0),
    };
    Ok(match (plus_k, minus_k) {
        (None, _) => verdict(
            Status::Out,
            None,
            "|λ| < 1 and the n → +∞ tail is not exponential: |λ|^{-n}β grows for every k".into(),
        ),
        (_, None) => verdict(
            Status::Out,
            None,
            "|λ| > 1 and the n → −∞ tail is not exponential: |λ|^{-n}β grows for every k".into(),
        ),
        (Some(a), Some(b)) => {
            let k = a.max(b);
            let mut detail = format!("bounded for k = {} (n → +∞ needs k ≥ {}, n → −∞ needs k ≥ {})", k, a, b);
            if k > k_max {
                detail.push_str(&format!("; least k exceeds kMax = {}", k_max));
            }
            verdict(Status::In, Some(k), detail)
        }
    })
}

/// Fits `y ≈ c₀ + c₁ n + c₂ ln|n|` and returns `c₁`.
fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let scale = points.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    let feats: Vec<[f64; 2]> = points.iter().map(|&(n, _)| [n / scale, libm::log(n.abs() / scale)]).collect();
    let mean = |f: &dyn Fn(usize) -> f64| (0..points.len()).map(f).sum::<f64>() / m;
    let mx = [mean(&|i| feats[i][0]), mean(&|i| feats[i][1])];
    let my = mean(&|i| points[i].1);
    let mut a = [[0.0; 2]; 2];
    let mut b = [0.0; 2];
    for (f, p) in feats.iter().zip(points) {
        let x = [f[0] - mx[0], f[1] - mx[1]];
        for r in 0..2 {
            for c in 0..2 {
                a[r][c] += x[r] * x[c];
            }
            b[r] += x[r] * (p.1 - my);
        }
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let c1 = (b[0] * a[1][1] - a[0][1] * b[1]) / det;
    c1 / scale
}

/// Sampled cross-check: for each `k ≤ kMax` regress `ln s_n` separately on
/// `n ∈ [N/2, N]` and `n ∈ [−N, −N/2]` (with a `ln|n|` term absorbing
/// polynomial factors) and read boundedness from the linear slope.
pub fn sampled_membership(family: &WeightFamily, lambda: &Lambda, k_max: u64, horizon: u64) -> Result<SigmaVerdict> {
    family.validate()?;
    lambda.check_finite()?;
    let verdict = |status, witness_k, detail: String| SigmaVerdict { status, witness_k, mode: Mode::Sampled, detail };
    if lambda.is_zero() {
        return Ok(verdict(Status::Out, None, "zero is never an extended eigenvalue".into()));
    }
    if horizon < 8 * (k_max + 1) || horizon > i64::MAX as u64 / 4 {
        return Err(Error::InvalidArgument(format!(
            "horizon {} must be at least 8·(kMax + 1) = {}",
            horizon,
            8 * (k_max + 1)
        )));
    }
    let n_max = horizon as i64;
    let k_max_i = k_max as i64;
    // prefix[i] = Σ ln w_j for j in [lo, lo + i)
    let lo = -n_max - k_max_i;
    let mut prefix = Vec::with_capacity((2 * n_max + k_max_i + 2) as usize);
    prefix.push(0.0f64);
    for j in lo..=n_max {
        let last = *prefix.last().unwrap_or(&0.0);
        prefix.push(last + family.ln_weight(j)?);
    }
    let ln_beta = |k: i64, n: i64| prefix[(n - lo + 1) as usize] - prefix[(n - k + 1 - lo) as usize];
    let ln_r = libm::log(lambda.modulus());
    let half = n_max / 2;

    let mut all_fail = true;
    for k in 0..=k_max_i {
        let plus: Vec<(f64, f64)> = (half..=n_max).map(|n| (n as f64, -(n as f64) * ln_r + ln_beta(k, n))).collect();
        let minus: Vec<(f64, f64)> = (-n_max..=-half).map(|n| (n as f64, -(n as f64) * ln_r + ln_beta(k, n))).collect();
        let sp = regression_slope(&plus);
        let sm = regression_slope(&minus);
        let plus_bounded = sp < -TAU_SLOPE;
        let plus_unbounded = sp > TAU_SLOPE;
        let minus_bounded = sm > TAU_SLOPE;
        let minus_unbounded = sm < -TAU_SLOPE;
        if plus_bounded && minus_bounded {
            return Ok(verdict(
                Status::In,
                Some(k as u64),
                format!("k = {}: slopes {:.3e} (n > 0) and {:.3e} (n < 0) both clear τ = {:e}", k, sp, sm, TAU_SLOPE),
            ));
        }
        if !(plus_unbounded || minus_unbounded) {
            all_fail = false;
        }
    }
    Ok(if all_fail {
        verdict(Status::Out, None, format!("every k ≤ {} has a tail slope beyond τ = {:e} in the unbounded direction", k_max, TAU_SLOPE))
    } else {
        verdict(Status::Unknown, None, format!("some k ≤ {} has a slope within τ = {:e} of zero", k_max, TAU_SLOPE))
    })
}
