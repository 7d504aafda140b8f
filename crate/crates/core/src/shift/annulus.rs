use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{shift_membership, Mode, Status};
use crate::error::{Error, Result};
use crate::lambda::Lambda;
use crate::scalar::ratio_pow;
use crate::weights::{TailClass, WeightFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{}", r),
            Radius::Infinite => f.write_str("inf"),
        }
    }
}

/// Boundary behaviour as `inner-outer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusShape {
    ClosedClosed,
    OpenClosed,
    ClosedOpen,
    OpenOpen,
}

impl AnnulusShape {
    pub fn name(self) -> &'static str {
        match self {
            AnnulusShape::ClosedClosed => "closed-closed",
            AnnulusShape::OpenClosed => "open-closed",
            AnnulusShape::ClosedOpen => "closed-open",
            AnnulusShape::OpenOpen => "open-open",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusReport {
    /// `c_k` for `k = 0..=kMax`.
    pub c_seq: Vec<BigRational>,
    /// `d_k` for `k = 0..=kMax`.
    pub d_seq: Vec<BigRational>,
    pub c: Radius,
    pub d: Radius,
    pub shape: AnnulusShape,
    pub contains_unit_circle: bool,
}

/// Radii `c_k = limsup |β(n+1, n+k)|^{1/n}` and
/// `d_k = liminf |β(1−n, k−n)|^{-1/n}` (n → ∞), with their limits.
///
/// On an exponential tail `b^|n|` the `k`-fold products behave like
/// `b^{k|n|}`, giving `c_k = b₊^k` and `d_k = b₋^{-k}`; every other tail
/// gives 1. The limits are therefore `0`/`∞` for exponential tails and `1`
/// otherwise. Whether each boundary circle belongs to `Σ(T)` is decided by
/// membership tests on it, not inferred.
pub fn annulus(family: &WeightFamily, k_max: u64) -> Result<AnnulusReport> {
    family.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidArgument("annulus needs kMax >= 1".into()));
    }
    let growth = family.growth_descriptor()?;
    let one = BigRational::one();
    let c_seq: Vec<BigRational> = (0..=k_max)
        .map(|k| match &growth.plus {
            TailClass::Exponential { base } => ratio_pow(base, k),
            _ => one.clone(),
        })
        .collect();
    let d_seq: Vec<BigRational> = (0..=k_max)
        .map(|k| match &growth.minus {
            TailClass::Exponential { base } => one.clone() / ratio_pow(base, k),
            _ => one.clone(),
        })
        .collect();
    let c = match growth.plus {
        TailClass::Exponential { .. } => Radius::Finite(BigRational::zero()),
        _ => Radius::Finite(one.clone()),
    };
    let d = match growth.minus {
        TailClass::Exponential { .. } => Radius::Infinite,
        _ => Radius::Finite(one.clone()),
    };
    let closed_at = |r: &Radius| -> Result<bool> {
        Ok(match r {
            Radius::Infinite => false,
            Radius::Finite(r) => {
                shift_membership(family, &Lambda::polar(r.clone(), 0.0), k_max, Mode::Analytic)?.status == Status::In
            }
        })
    };
    let shape = match (closed_at(&c)?, closed_at(&d)?) {
        (true, true) => AnnulusShape::ClosedClosed,
        (false, true) => AnnulusShape::OpenClosed,
        (true, false) => AnnulusShape::ClosedOpen,
        (false, false) => AnnulusShape::OpenOpen,
    };
    let contains_unit_circle = shift_membership(family, &Lambda::real(one), 0, Mode::Analytic)?.status == Status::In;
    Ok(AnnulusReport { c_seq, d_seq, c, d, shape, contains_unit_circle })
}
