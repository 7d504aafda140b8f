//! The spectral parameter λ.
//!
//! Exact decisions need `|λ|²` as a rational, so a λ remembers how it was
//! written: Gaussian-rational literals (`3/5+4/5i`) and polar points with a
//! rational modulus keep their exact data; everything else is a plain
//! `Complex64`.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, ratio_to_f64};

#[derive(Debug, Clone, PartialEq)]
pub enum Lambda {
    Rational { re: BigRational, im: BigRational },
    Polar { modulus: BigRational, phase: f64 },
    Float(Complex64),
}

impl Lambda {
    pub fn rational(re: BigRational, im: BigRational) -> Self {
        Lambda::Rational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Lambda::Rational { re, im: BigRational::zero() }
    }

    pub fn float(re: f64, im: f64) -> Self {
        Lambda::Float(Complex64::new(re, im))
    }

    pub fn polar(modulus: BigRational, phase: f64) -> Self {
        Lambda::Polar { modulus, phase }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Lambda::Rational { re, im } => Complex64::new(ratio_to_f64(re), ratio_to_f64(im)),
            Lambda::Polar { modulus, phase } => Complex64::from_polar(ratio_to_f64(modulus), *phase),
            Lambda::Float(z) => *z,
        }
    }

    /// Exact `|λ|²` when available.
    pub fn modulus_sq_exact(&self) -> Option<BigRational> {
        match self {
            Lambda::Rational { re, im } => Some(re * re + im * im),
            Lambda::Polar { modulus, .. } => Some(modulus * modulus),
            Lambda::Float(_) => None,
        }
    }

    pub fn modulus(&self) -> f64 {
        match self {
            Lambda::Polar { modulus, .. } => ratio_to_f64(modulus),
            _ => self.to_complex().norm(),
        }
    }

    pub fn phase(&self) -> f64 {
        match self {
            Lambda::Polar { phase, .. } => *phase,
            _ => self.to_complex().arg(),
        }
    }

    /// The value as a Gaussian rational, if it is one.
    pub fn as_exact(&self) -> Option<Complex<BigRational>> {
        match self {
            Lambda::Rational { re, im } => Some(Complex::new(re.clone(), im.clone())),
            Lambda::Polar { modulus, phase } if *phase == 0.0 => {
                Some(Complex::new(modulus.clone(), BigRational::zero()))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Lambda::Rational { re, im } => re.is_zero() && im.is_zero(),
            Lambda::Polar { modulus, .. } => modulus.is_zero(),
            Lambda::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Lambda::Rational { .. } => true,
            Lambda::Polar { phase, .. } => phase.is_finite(),
            Lambda::Float(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("lambda must be finite, got {}", self)))
        }
    }

    /// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`. Parts are rationals
    /// (`1/2`) or decimals (`0.5`, `1e-3`); rational input stays exact.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::Syntax { pos: 0, msg: format!("{} in complex literal {:?}", msg, text) };
        if s.is_empty() {
            return Err(err("empty input"));
        }
        if s.contains("nan") || s.contains("NaN") || s.contains("inf") {
            return Err(Error::InvalidArgument(format!("lambda must be finite, got {:?}", text)));
        }
        let (real_part, imag_part) = if let Some(body) = s.strip_suffix(['i', 'j']) {
            // split at the last sign that is not the leading one and not an exponent sign
            let bytes = body.as_bytes();
            let mut split = None;
            for at in (1..bytes.len()).rev() {
                if (bytes[at] == b'+' || bytes[at] == b'-') && !matches!(bytes[at - 1], b'e' | b'E') {
                    split = Some(at);
                    break;
                }
            }
            match split {
                Some(at) => (&body[..at], &body[at..]),
                None => ("0", body),
            }
        } else {
            (s.as_str(), "0")
        };
        let imag_text = match imag_part {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re = parse_rational(real_part).ok_or_else(|| err("bad real part"))?;
        let im = parse_rational(imag_text).ok_or_else(|| err("bad imaginary part"))?;
        Ok(Lambda::Rational { re, im })
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Rational { re, im } => {
                if im.is_negative() {
                    write!(f, "{}-{}i", re, -im)
                } else {
                    write!(f, "{}+{}i", re, im)
                }
            }
            Lambda::Polar { modulus, phase } => write!(f, "{}·e^({}i)", modulus, phase),
            Lambda::Float(z) => {
                let im = if z.im < 0.0 { format!("-{}i", -z.im) } else { format!("+{}i", z.im) };
                write!(f, "{}{}", z.re, im)
            }
        }
    }
}
