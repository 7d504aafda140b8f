//! Exact rational magnitudes and the helpers that move between rationals and
//! floating point without overflowing on large numerators.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A non-negative magnitude that is either an exact rational or a float with
/// an absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactScalar {
    Exact(BigRational),
    Approx { value: f64, error: f64 },
}

impl ExactScalar {
    pub fn one() -> Self {
        ExactScalar::Exact(BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactScalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Exact(r) => Some(r),
            ExactScalar::Approx { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Exact(r) => ratio_to_f64(r),
            ExactScalar::Approx { value, .. } => *value,
        }
    }

    /// Natural logarithm, finite even when the value under- or overflows `f64`.
    pub fn ln(&self) -> f64 {
        match self {
            ExactScalar::Exact(r) => ln_ratio(r),
            ExactScalar::Approx { value, .. } => libm::log(*value),
        }
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        match (self, other) {
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) => ExactScalar::Exact(a * b),
            _ => {
                let (a, ea) = self.value_and_error();
                let (b, eb) = other.value_and_error();
                let value = a * b;
                let error = ea * libm::fabs(b) + eb * libm::fabs(a) + ea * eb + f64::EPSILON * libm::fabs(value);
                ExactScalar::Approx { value, error }
            }
        }
    }

    fn value_and_error(&self) -> (f64, f64) {
        match self {
            ExactScalar::Exact(r) => {
                let v = ratio_to_f64(r);
                (v, f64::EPSILON * libm::fabs(v))
            }
            ExactScalar::Approx { value, error } => (*value, *error),
        }
    }

    /// Total order used for maxima. Exact pairs compare exactly; anything
    /// involving an approximation compares by logarithm.
    pub fn cmp_magnitude(&self, other: &ExactScalar) -> Ordering {
        match (self, other) {
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) => a.cmp(b),
            _ => self.ln().partial_cmp(&other.ln()).unwrap_or(Ordering::Equal),
        }
    }

    /// Equality used for argmax sets: exact for rationals, relative `1e-12` otherwise.
    pub fn same_magnitude(&self, other: &ExactScalar) -> bool {
        match (self, other) {
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) => a == b,
            _ => libm::fabs(self.ln() - other.ln()) <= 1e-12,
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Exact(r) => write!(f, "{}", r),
            ExactScalar::Approx { value, error } => write!(f, "{:e}±{:.1e}", value, error),
        }
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `ln |r|`; `-inf` for zero.
pub fn ln_ratio(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Converts a rational to the nearest `f64` even when numerator and
/// denominator individually overflow.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if r.numer().bits() < 1000 && r.denom().bits() < 1000 {
        if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
            return n / d;
        }
    }
    let magnitude = libm::exp(ln_ratio(r));
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Exact rational from a finite `f64`.
pub fn f64_to_ratio(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn ratio_pow(base: &BigRational, exp: u64) -> BigRational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Parses `7`, `-3/4`, `0.125`, `1e-3` or `2.5E2` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_decimal(num)?;
        let d = parse_decimal(den)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (sign, digits) = match mantissa.as_bytes().first()? {
        b'-' => (Sign::Minus, &mantissa[1..]),
        b'+' => (Sign::Plus, &mantissa[1..]),
        _ => (Sign::Plus, mantissa),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty() {
        return None;
    }
    if !whole.bytes().chain(fractional.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut all = String::from(whole);
    all.push_str(fractional);
    let magnitude = BigUint::parse_bytes(all.as_bytes(), 10).unwrap_or_default();
    let value = BigRational::from_integer(BigInt::from_biguint(sign, magnitude));
    let scale = exponent - fractional.len() as i32;
    let ten = int(10);
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 { value * power } else { value / power })
}

/// Canonical text for a rational: `3`, `-1/2`.
pub fn render_rational(r: &BigRational) -> String {
    r.to_string()
}
