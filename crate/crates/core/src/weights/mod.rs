//! Symbolic two-sided weight sequences `{w_n}` for bilateral weighted shifts.
//!
//! A [`WeightFamily`] is a small tree of closed-form kinds. Every kind keeps
//! its weights positive and bounded, evaluates exactly over the rationals
//! (integer power laws included), and exposes its asymptotic class at both
//! ends of `Z` without sampling.

mod dsl;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{ln_ratio, ratio_pow, ratio_to_f64, ExactScalar};

pub use dsl::{parse_family, render_family};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightFamily {
    /// `w_n = (1 + |n|)^(-alpha)`.
    PowerLaw { alpha: BigRational },
    /// `w_n = value`.
    Constant { value: BigRational },
    /// `w_n = pos^n` for `n > 0`, `neg^|n|` for `n < 0`, `w_0 = 1`.
    ExpTail { pos: BigRational, neg: BigRational },
    /// `neg` for `n <= split`, `pos` for `n > split`; both branches are
    /// evaluated at the original index.
    Piecewise { neg: Box<WeightFamily>, pos: Box<WeightFamily>, split: i64 },
    /// Explicit values on a finite set of indices, `tail` elsewhere.
    Table { values: BTreeMap<i64, BigRational>, tail: Option<Box<WeightFamily>> },
}

/// Asymptotic class of `w_n` along one end of `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailClass {
    /// `w_n ~ |n|^exponent`, `exponent < 0`.
    Polynomial { exponent: BigRational },
    /// `w_n = base^|n|` with `0 < base < 1`.
    Exponential { base: BigRational },
    /// `w_n = value` eventually.
    Constant { value: BigRational },
}

impl TailClass {
    /// Slope of `ln w_n` in `|n|`: `ln base` for exponential tails, zero otherwise.
    pub fn rate(&self) -> f64 {
        match self {
            TailClass::Exponential { base } => ln_ratio(base),
            _ => 0.0,
        }
    }

    /// Whether `w_n → 0` along this tail.
    pub fn decays(&self) -> bool {
        !matches!(self, TailClass::Constant { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthDescriptor {
    pub plus: TailClass,
    pub minus: TailClass,
}

impl WeightFamily {
    pub fn power_law(alpha: BigRational) -> Self {
        WeightFamily::PowerLaw { alpha }
    }

    pub fn constant(value: BigRational) -> Self {
        WeightFamily::Constant { value }
    }

    pub fn exp_tail(pos: BigRational, neg: BigRational) -> Self {
        WeightFamily::ExpTail { pos, neg }
    }

    pub fn piecewise(neg: WeightFamily, pos: WeightFamily, split: i64) -> Self {
        WeightFamily::Piecewise { neg: Box::new(neg), pos: Box::new(pos), split }
    }

    pub fn table(values: BTreeMap<i64, BigRational>, tail: WeightFamily) -> Self {
        WeightFamily::Table { values, tail: Some(Box::new(tail)) }
    }

    /// Checks positivity and boundedness of every parameter.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, r: &BigRational| {
            if r.is_positive() {
                Ok(())
            } else {
                Err(Error::InvalidFamily(format!("{} must be positive, got {}", name, r)))
            }
        };
        match self {
            WeightFamily::PowerLaw { alpha } => {
                if alpha.is_negative() {
                    return Err(Error::InvalidFamily(format!(
                        "powerlaw alpha = {} gives an unbounded family",
                        alpha
                    )));
                }
                positive("powerlaw alpha", alpha)
            }
            WeightFamily::Constant { value } => positive("constant value", value),
            WeightFamily::ExpTail { pos, neg } => {
                for (name, base) in [("exptail pos", pos), ("exptail neg", neg)] {
                    positive(name, base)?;
                    if *base > BigRational::one() {
                        return Err(Error::InvalidFamily(format!(
                            "{} = {} exceeds 1 and gives an unbounded family",
                            name, base
                        )));
                    }
                }
                Ok(())
            }
            WeightFamily::Piecewise { neg, pos, .. } => {
                neg.validate()?;
                pos.validate()
            }
            WeightFamily::Table { values, tail } => {
                for (n, v) in values {
                    positive(&format!("table value at {}", n), v)?;
                }
                match tail {
                    Some(t) => t.validate(),
                    None => Err(Error::InvalidFamily("table families need a tail rule".into())),
                }
            }
        }
    }

    /// `w_n`, exact for every kind except power laws with non-integer exponent.
    pub fn eval(&self, n: i64) -> Result<ExactScalar> {
        match self {
            WeightFamily::PowerLaw { alpha } => {
                let base = n.unsigned_abs() + 1;
                if alpha.is_integer() {
                    let e = alpha.to_integer().to_u64().ok_or_else(|| {
                        Error::InvalidFamily(format!("exponent {} too large", alpha))
                    })?;
                    let denom = num_traits::pow(BigInt::from(base), e as usize);
                    Ok(ExactScalar::Exact(BigRational::new(BigInt::one(), denom)))
                } else {
                    let value = libm::exp(-ratio_to_f64(alpha) * libm::log(base as f64));
                    Ok(ExactScalar::Approx { value, error: 4.0 * f64::EPSILON * value })
                }
            }
            WeightFamily::Constant { value } => Ok(ExactScalar::Exact(value.clone())),
            WeightFamily::ExpTail { pos, neg } => {
                let value = match n {
                    0 => BigRational::one(),
                    n if n > 0 => ratio_pow(pos, n as u64),
                    n => ratio_pow(neg, n.unsigned_abs()),
                };
                Ok(ExactScalar::Exact(value))
            }
            WeightFamily::Piecewise { neg, pos, split } => {
                if n <= *split {
                    neg.eval(n)
                } else {
                    pos.eval(n)
                }
            }
            WeightFamily::Table { values, tail } => match (values.get(&n), tail) {
                (Some(v), _) => Ok(ExactScalar::Exact(v.clone())),
                (None, Some(t)) => t.eval(n),
                (None, None) => Err(Error::OutsideDomain(n)),
            },
        }
    }

    /// `ln w_n` computed symbolically, so deep tails never underflow.
    pub fn ln_weight(&self, n: i64) -> Result<f64> {
        match self {
            WeightFamily::PowerLaw { alpha } => {
                Ok(-ratio_to_f64(alpha) * libm::log((n.unsigned_abs() + 1) as f64))
            }
            WeightFamily::Constant { value } => Ok(ln_ratio(value)),
            WeightFamily::ExpTail { pos, neg } => Ok(match n {
                0 => 0.0,
                n if n > 0 => n as f64 * ln_ratio(pos),
                n => n.unsigned_abs() as f64 * ln_ratio(neg),
            }),
            WeightFamily::Piecewise { neg, pos, split } => {
                if n <= *split {
                    neg.ln_weight(n)
                } else {
                    pos.ln_weight(n)
                }
            }
            WeightFamily::Table { values, tail } => match (values.get(&n), tail) {
                (Some(v), _) => Ok(ln_ratio(v)),
                (None, Some(t)) => t.ln_weight(n),
                (None, None) => Err(Error::OutsideDomain(n)),
            },
        }
    }

    /// `β(k, n) = w_k ⋯ w_n`, with `β(n + 1, n) = 1`.
    pub fn beta(&self, k: i64, n: i64) -> Result<ExactScalar> {
        if k > n + 1 {
            return Err(Error::BetaRange { k, n });
        }
        (k..=n).try_fold(ExactScalar::one(), |acc, j| Ok(acc.mul(&self.eval(j)?)))
    }

    /// Tail classes read off the family tree.
    pub fn growth_descriptor(&self) -> Result<GrowthDescriptor> {
        Ok(GrowthDescriptor { plus: self.tail_class(true)?, minus: self.tail_class(false)? })
    }

    fn tail_class(&self, plus: bool) -> Result<TailClass> {
        Ok(match self {
            WeightFamily::PowerLaw { alpha } => TailClass::Polynomial { exponent: -alpha.clone() },
            WeightFamily::Constant { value } => TailClass::Constant { value: value.clone() },
            WeightFamily::ExpTail { pos, neg } => {
                let base = if plus { pos } else { neg };
                if base.is_one() {
                    TailClass::Constant { value: BigRational::one() }
                } else {
                    TailClass::Exponential { base: base.clone() }
                }
            }
            WeightFamily::Piecewise { neg, pos, .. } => {
                if plus {
                    pos.tail_class(true)?
                } else {
                    neg.tail_class(false)?
                }
            }
            WeightFamily::Table { tail, .. } => match tail {
                Some(t) => t.tail_class(plus)?,
                None => return Err(Error::InvalidFamily("table families need a tail rule".into())),
            },
        })
    }

    /// `(left, right)` such that `w_j` is nondecreasing in `j` for `j <= left`
    /// and nonincreasing for `j >= right`. Used to certify maxima over `Z`.
    pub(crate) fn monotone_tails(&self) -> (i64, i64) {
        match self {
            WeightFamily::PowerLaw { .. } | WeightFamily::Constant { .. } | WeightFamily::ExpTail { .. } => {
                (0, 0)
            }
            WeightFamily::Piecewise { neg, pos, split } => {
                let (left, _) = neg.monotone_tails();
                let (_, right) = pos.monotone_tails();
                (left.min(*split), right.max(*split + 1))
            }
            WeightFamily::Table { values, tail } => {
                let (mut left, mut right) = tail.as_ref().map_or((0, 0), |t| t.monotone_tails());
                if let (Some((&lo, _)), Some((&hi, _))) = (values.first_key_value(), values.last_key_value()) {
                    left = left.min(lo - 1);
                    right = right.max(hi + 1);
                }
                (left, right)
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            WeightFamily::PowerLaw { alpha } => alpha.is_integer(),
            WeightFamily::Constant { .. } | WeightFamily::ExpTail { .. } => true,
            WeightFamily::Piecewise { neg, pos, .. } => neg.is_exact() && pos.is_exact(),
            WeightFamily::Table { tail, .. } => tail.as_ref().is_none_or(|t| t.is_exact()),
        }
    }

    /// Whether this is `(1 + |n|)^-1`.
    pub fn is_harmonic(&self) -> bool {
        matches!(self, WeightFamily::PowerLaw { alpha } if alpha.is_one())
    }
}

impl core::fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&render_family(self))
    }
}

impl core::str::FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_family(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn harmonic() -> WeightFamily {
        WeightFamily::power_law(int(1))
    }

    fn exact(x: ExactScalar) -> BigRational {
        x.as_rational().cloned().expect("exact")
    }

    #[test]
    fn eval_examples() {
        assert_eq!(exact(harmonic().eval(0).unwrap()), int(1));
        assert_eq!(exact(harmonic().eval(-2).unwrap()), frac(1, 3));
        let geo = WeightFamily::exp_tail(frac(1, 2), frac(1, 2));
        assert_eq!(exact(geo.eval(3).unwrap()), frac(1, 8));
        assert_eq!(exact(geo.eval(-3).unwrap()), frac(1, 8));
    }

    #[test]
    fn beta_examples() {
        let h = harmonic();
        assert_eq!(exact(h.beta(3, 2).unwrap()), int(1));
        assert_eq!(exact(h.beta(1, 2).unwrap()), frac(1, 6));
        assert_eq!(exact(h.beta(-1, 1).unwrap()), frac(1, 4));
        assert_eq!(h.beta(4, 2), Err(Error::BetaRange { k: 4, n: 2 }));
    }

    #[test]
    fn empty_product_is_one_everywhere() {
        let fams = [harmonic(), WeightFamily::exp_tail(frac(1, 3), frac(2, 3))];
        for f in &fams {
            for n in -1000..=1000 {
                assert_eq!(exact(f.beta(n + 1, n).unwrap()), int(1));
            }
        }
    }

    #[test]
    fn table_without_tail_rejects_unknown_indices() {
        let mut values = BTreeMap::new();
        values.insert(0, int(2));
        let t = WeightFamily::Table { values, tail: None };
        assert_eq!(exact(t.eval(0).unwrap()), int(2));
        assert_eq!(t.eval(1), Err(Error::OutsideDomain(1)));
        assert!(t.validate().is_err());
    }

    #[test]
    fn growth_examples() {
        let d = harmonic().growth_descriptor().unwrap();
        assert_eq!(d.plus, TailClass::Polynomial { exponent: int(-1) });
        assert_eq!(d.minus, TailClass::Polynomial { exponent: int(-1) });
        let d = WeightFamily::constant(int(1)).growth_descriptor().unwrap();
        assert_eq!(d.plus, TailClass::Constant { value: int(1) });
        let d = WeightFamily::exp_tail(frac(1, 2), frac(1, 2)).growth_descriptor().unwrap();
        assert_eq!(d.plus, TailClass::Exponential { base: frac(1, 2) });
        assert!((d.minus.rate() - libm::log(0.5)).abs() < 1e-15);
        let pw = WeightFamily::piecewise(
            WeightFamily::constant(int(1)),
            WeightFamily::exp_tail(frac(1, 2), int(1)),
            0,
        );
        let d = pw.growth_descriptor().unwrap();
        assert_eq!(d.plus, TailClass::Exponential { base: frac(1, 2) });
        assert_eq!(d.minus, TailClass::Constant { value: int(1) });
    }

    /// The symbolic class must agree with a regression of sampled `ln w_n`
    /// on `|n| ≤ 1000` to within 5%.
    #[test]
    fn growth_agrees_with_sampled_regression() {
        let fams = [
            harmonic(),
            WeightFamily::power_law(frac(3, 2)),
            WeightFamily::exp_tail(frac(1, 2), frac(3, 4)),
            WeightFamily::constant(frac(5, 7)),
            WeightFamily::piecewise(WeightFamily::power_law(int(2)), WeightFamily::exp_tail(frac(1, 3), int(1)), 4),
        ];
        for f in &fams {
            let d = f.growth_descriptor().unwrap();
            for (plus, class) in [(true, &d.plus), (false, &d.minus)] {
                let sign = if plus { 1 } else { -1 };
                let pts: alloc::vec::Vec<(f64, f64, f64)> = (100..=1000)
                    .map(|m| {
                        let n = sign * m;
                        (m as f64, libm::log(m as f64 + 1.0), f.ln_weight(n).unwrap())
                    })
                    .collect();
                match class {
                    TailClass::Exponential { base } => {
                        let slope = fit_slope(pts.iter().map(|p| (p.0, p.2)));
                        let want = ln_ratio(base);
                        assert!((slope - want).abs() <= 0.05 * want.abs(), "{} {}", slope, want);
                    }
                    TailClass::Polynomial { exponent } => {
                        let slope = fit_slope(pts.iter().map(|p| (p.1, p.2)));
                        let want = ratio_to_f64(exponent);
                        assert!((slope - want).abs() <= 0.05 * want.abs(), "{} {}", slope, want);
                    }
                    TailClass::Constant { value } => {
                        for p in &pts {
                            assert!((p.2 - ln_ratio(value)).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    fn fit_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
        let pts: alloc::vec::Vec<_> = points.collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    }

    pub(crate) fn small_family() -> impl Strategy<Value = WeightFamily> {
        let unit = (1i64..=6, 1i64..=6).prop_map(|(a, b)| frac(a.min(b), a.max(b)));
        let leaf = prop_oneof![
            (1i64..=3).prop_map(|a| WeightFamily::power_law(int(a))),
            (1i64..=5, 1i64..=5).prop_map(|(a, b)| WeightFamily::constant(frac(a, b))),
            (unit.clone(), unit.clone()).prop_map(|(p, n)| WeightFamily::exp_tail(p, n)),
        ];
        leaf.prop_recursive(2, 6, 2, move |inner| {
            prop_oneof![
                (inner.clone(), inner.clone(), -4i64..=4)
                    .prop_map(|(a, b, s)| WeightFamily::piecewise(a, b, s)),
                (inner, proptest::collection::btree_map(-5i64..=5, (1i64..=4, 1i64..=4), 0..3)).prop_map(
                    |(t, vals)| {
                        let values = vals.into_iter().map(|(k, (a, b))| (k, frac(a, b))).collect();
                        WeightFamily::table(values, t)
                    }
                ),
            ]
        })
    }

    proptest! {
        #[test]
        fn beta_is_multiplicative(f in small_family(), k in -20i64..20, len1 in 0i64..8, len2 in 0i64..8) {
            let n = k + len1 - 1;
            let m = n + len2;
            let whole = f.beta(k, m).unwrap();
            let split = f.beta(k, n).unwrap().mul(&f.beta(n + 1, m).unwrap());
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn beta_is_positive(f in small_family(), k in -30i64..30, len in 0i64..12) {
            let b = f.beta(k, k + len - 1).unwrap();
            prop_assert!(b.as_rational().unwrap().is_positive());
        }

        #[test]
        fn monotone_tails_hold(f in small_family(), k in 0i64..40) {
            let (left, right) = f.monotone_tails();
            let r = right + k;
            prop_assert!(f.eval(r + 1).unwrap().cmp_magnitude(&f.eval(r).unwrap()).is_le());
            let l = left - k;
            prop_assert!(f.eval(l - 1).unwrap().cmp_magnitude(&f.eval(l).unwrap()).is_le());
        }
    }
}
