use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{factorial, ExactScalar};
use crate::weights::WeightFamily;

/// Default cut-off for the final root in the quasinilpotence verdict.
pub const DEFAULT_QN_THRESHOLD: f64 = 0.5;

/// Smallest window certifying `max_n β(n−k+1, n)` over all of `Z`.
///
/// With weights nondecreasing up to `left` and nonincreasing from `right`,
/// `n ↦ β(n−k+1, n)` is nondecreasing for `n ≤ left` and nonincreasing for
/// `n ≥ right + k − 1`, so the maximum is attained in between; one extra
/// index on each side keeps an attaining `n` off the window edge. The window
/// must also be at least `2k`.
pub fn required_window(family: &WeightFamily, k: u64) -> u64 {
    let (left, right) = family.monotone_tails();
    let k = k as i64;
    (2 * k).max(1 - left).max(right + k) as u64
}

fn scan(family: &WeightFamily, k: u64, window: u64) -> Result<(ExactScalar, Vec<i64>)> {
    family.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let required = required_window(family, k);
    if window < required {
        return Err(Error::WindowTooSmall { window, required });
    }
    let w = window as i64;
    let k = k as i64;
    let mut best: Option<ExactScalar> = None;
    let mut argmax = Vec::new();
    for n in -w..=w {
        let b = family.beta(n - k + 1, n)?;
        match &best {
            Some(m) if b.same_magnitude(m) => argmax.push(n),
            Some(m) if b.cmp_magnitude(m) != Ordering::Greater => {}
            _ => {
                best = Some(b);
                argmax.clear();
                argmax.push(n);
            }
        }
    }
    if argmax.iter().all(|&n| n == -w || n == w) {
        return Err(Error::MaxOnBoundary);
    }
    Ok((best.unwrap_or_else(ExactScalar::one), argmax))
}

/// `‖T^k‖ = max_n β(n−k+1, n)`, maximized over `n ∈ [−window, window]`.
pub fn power_norm(family: &WeightFamily, k: u64, window: u64) -> Result<ExactScalar> {
    let (norm, _) = scan(family, k, window)?;
    if family.is_harmonic() {
        debug_assert_eq!(norm, ExactScalar::Exact(harmonic_norm_closed_form(k)));
    }
    Ok(norm)
}

/// Every `n` in the window attaining the maximum, ascending.
pub fn argmax_beta(family: &WeightFamily, k: u64, window: u64) -> Result<Vec<i64>> {
    Ok(scan(family, k, window)?.1)
}

/// `‖T^k‖` for `w_n = (1+|n|)^{-1}`: `(m!)^{-2}` with `m = (k+1)/2` for odd
/// `k`, `(m!(m+1)!)^{-1}` with `m = k/2` for even `k`.
pub fn harmonic_norm_closed_form(k: u64) -> BigRational {
    let denom = if k % 2 == 1 {
        let f = factorial(k.div_ceil(2));
        &f * &f
    } else {
        let m = k / 2;
        factorial(m) * factorial(m + 1)
    };
    BigRational::new(BigInt::from(1), denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileBasis {
    /// Both tails decay, so `‖T^k‖^{1/k} → 0` follows from the family.
    Symbolic,
    /// Only the computed range supports the verdict.
    Evidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormProfile {
    /// `‖T^k‖` for `k = 1..=kMax`.
    pub norms: Vec<ExactScalar>,
    /// `‖T^k‖^{1/k}`.
    pub roots: Vec<f64>,
    pub quasinilpotent: bool,
    pub basis: ProfileBasis,
    pub threshold: f64,
}

/// Roots `‖T^k‖^{1/k}` for `k = 1..=kMax`. The verdict requires the roots
/// to be nonincreasing over the second half of the range, to have strictly
/// dropped across it, and to end below `threshold`.
pub fn quasinilpotence_profile(family: &WeightFamily, k_max: u64, threshold: f64) -> Result<NormProfile> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("quasinilpotence profile needs kMax >= 2".into()));
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument("threshold must be positive".into()));
    }
    let mut norms = Vec::with_capacity(k_max as usize);
    let mut roots = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let norm = power_norm(family, k, required_window(family, k))?;
        roots.push(libm::exp(norm.ln() / k as f64));
        norms.push(norm);
    }
    let tail = &roots[(k_max as usize) / 2..];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let last = *tail.last().unwrap_or(&1.0);
    let dropped = last < tail[0];
    let quasinilpotent = nonincreasing && dropped && last < threshold;
    let g = family.growth_descriptor()?;
    let basis = if quasinilpotent && g.plus.decays() && g.minus.decays() {
        ProfileBasis::Symbolic
    } else {
        ProfileBasis::Evidence
    };
    Ok(NormProfile { norms, roots, quasinilpotent, basis, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn harmonic() -> WeightFamily {
        WeightFamily::power_law(int(1))
    }

    fn exact(r: BigRational) -> ExactScalar {
        ExactScalar::Exact(r)
    }

    #[test]
    fn norm_examples() {
        assert_eq!(power_norm(&harmonic(), 1, 2).unwrap(), exact(int(1)));
        assert_eq!(power_norm(&harmonic(), 2, 4).unwrap(), exact(frac(1, 2)));
        assert_eq!(power_norm(&harmonic(), 4, 8).unwrap(), exact(frac(1, 12)));
        assert_eq!(power_norm(&harmonic(), 3, 6).unwrap(), exact(frac(1, 4)));
    }

    #[test]
    fn brute_force_max_matches_closed_form() {
        for k in 1..=16i64 {
            let f = harmonic();
            let brute = (-3 * k..=3 * k).map(|n| f.beta(n - k + 1, n).unwrap().as_rational().unwrap().clone()).max().unwrap();
            assert_eq!(brute, harmonic_norm_closed_form(k as u64));
        }
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_beta(&harmonic(), 3, 6).unwrap(), alloc::vec![1]);
        assert_eq!(argmax_beta(&harmonic(), 2, 4).unwrap(), alloc::vec![0, 1]);
        for k in 1..12u64 {
            let set = argmax_beta(&harmonic(), k, 2 * k).unwrap();
            assert!(set.contains(&((k / 2) as i64)));
            if k % 2 == 0 {
                assert_eq!(set, alloc::vec![(k / 2) as i64 - 1, (k / 2) as i64]);
            }
        }
        let all = argmax_beta(&WeightFamily::constant(int(1)), 5, 10).unwrap();
        assert_eq!(all, (-10..=10).collect::<Vec<_>>());
    }

    #[test]
    fn window_checks() {
        assert_eq!(power_norm(&harmonic(), 3, 5), Err(Error::WindowTooSmall { window: 5, required: 6 }));
        assert!(power_norm(&harmonic(), 0, 5).is_err());
        // weights return to their supremum only after n = 40
        let f = crate::weights::parse_family("piecewise:split=40,neg=[exptail:pos=2/3,neg=1/2],pos=[constant:value=1]").unwrap();
        assert!(f.validate().is_ok());
        let need = required_window(&f, 2);
        assert!(need > 4);
        assert!(matches!(power_norm(&f, 2, 4), Err(Error::WindowTooSmall { .. })));
        assert!(power_norm(&f, 2, need).is_ok());
    }

    #[test]
    fn profile_examples() {
        let p = quasinilpotence_profile(&harmonic(), 40, DEFAULT_QN_THRESHOLD).unwrap();
        assert!((p.roots[39] - 0.1116).abs() < 1e-3);
        assert!(p.quasinilpotent);
        assert_eq!(p.basis, ProfileBasis::Symbolic);

        let p = quasinilpotence_profile(&WeightFamily::constant(int(1)), 20, DEFAULT_QN_THRESHOLD).unwrap();
        assert!(p.roots.iter().all(|&r| r == 1.0));
        assert!(!p.quasinilpotent);

        let p = quasinilpotence_profile(&harmonic(), 2, DEFAULT_QN_THRESHOLD).unwrap();
        assert_eq!(p.roots[0], 1.0);
        assert!((p.roots[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(quasinilpotence_profile(&harmonic(), 1, DEFAULT_QN_THRESHOLD).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn submultiplicative(f in crate::weights::tests::small_family(), k in 1u64..6, j in 1u64..6) {
            let norm = |m: u64| power_norm(&f, m, required_window(&f, m)).unwrap();
            let (a, b, ab) = (norm(k), norm(j), norm(k + j));
            match (&ab, &a.mul(&b)) {
                (ExactScalar::Exact(x), ExactScalar::Exact(y)) => prop_assert!(x <= y),
                (x, y) => prop_assert!(x.ln() <= y.ln() + 1e-12),
            }
        }
    }
}
