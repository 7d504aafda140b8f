//! Value parsers for flags and the matrix file format.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::Value;
use xeig_core::scalar::{f64_to_ratio, parse_rational};
use xeig_core::weights::parse_family;
use xeig_core::{DenseOperator, Lambda, WeightFamily};

use crate::Failure;

pub fn family(text: &str) -> Result<WeightFamily, String> {
    parse_family(text).map_err(|e| e.to_string())
}

pub fn lambda(text: &str) -> Result<Lambda, String> {
    Lambda::parse(text).map_err(|e| e.to_string())
}

/// Polar λ grid. Moduli stay exact where the input is.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub moduli: Vec<BigRational>,
    pub phases: Vec<f64>,
}

impl Grid {
    /// Points ordered by modulus, then phase.
    pub fn points(&self) -> Vec<(BigRational, f64)> {
        let mut moduli = self.moduli.clone();
        moduli.sort();
        let mut phases = self.phases.clone();
        phases.sort_by(f64::total_cmp);
        moduli.iter().flat_map(|m| phases.iter().map(move |&p| (m.clone(), p))).collect()
    }
}

pub fn grid(text: &str) -> Result<Grid, String> {
    let mut moduli = None;
    let mut phases = None;
    for axis in text.split(',') {
        let (name, body) = axis.split_once(':').ok_or_else(|| format!("grid axis {:?} needs the form name:values", axis))?;
        match name.trim() {
            "modulus" if moduli.is_none() => moduli = Some(modulus_axis(body)?),
            "phase" if phases.is_none() => phases = Some(phase_axis(body)?),
            "modulus" | "phase" => return Err(format!("axis {:?} given twice", name.trim())),
            other => return Err(format!("unknown grid axis {:?}; expected modulus or phase", other)),
        }
    }
    let moduli = moduli.ok_or("grid needs a modulus axis")?;
    let phases = phases.unwrap_or_else(|| vec![0.0]);
    if moduli.is_empty() || phases.is_empty() {
        return Err("empty grid".into());
    }
    Ok(Grid { moduli, phases })
}

fn steps(text: &str) -> Result<usize, String> {
    text.trim().parse::<usize>().map_err(|_| format!("invalid step count {:?}", text))
}

fn modulus(text: &str) -> Result<BigRational, String> {
    let r = parse_rational(text).ok_or_else(|| format!("invalid modulus {:?}", text))?;
    if r.is_negative() {
        return Err(format!("modulus {} is negative", text.trim()));
    }
    Ok(r)
}

/// `a..b:steps[:log]` (inclusive) or `v1|v2|...`.
fn modulus_axis(body: &str) -> Result<Vec<BigRational>, String> {
    if !body.contains("..") {
        return body.split('|').map(modulus).collect();
    }
    let mut parts = body.split(':');
    let range = parts.next().unwrap_or_default();
    let count = steps(parts.next().ok_or("modulus range needs a step count")?)?;
    let log = match parts.next() {
        None => false,
        Some("log") => true,
        Some(other) => return Err(format!("unknown modulus spacing {:?}", other)),
    };
    if parts.next().is_some() {
        return Err(format!("trailing input in modulus axis {:?}", body));
    }
    let (a, b) = range.split_once("..").ok_or("modulus range needs a..b")?;
    let (a, b) = (modulus(a)?, modulus(b)?);
    if count <= 1 {
        return Ok(if count == 1 { vec![a] } else { Vec::new() });
    }
    let last = BigRational::from_integer((count as i64 - 1).into());
    if log {
        if a.is_zero() || b.is_zero() {
            return Err("logarithmic modulus spacing needs positive endpoints".into());
        }
        let (la, lb) = (a.to_f64().unwrap_or(f64::NAN).ln(), b.to_f64().unwrap_or(f64::NAN).ln());
        return (0..count)
            .map(|i| match i {
                0 => Ok(a.clone()),
                i if i == count - 1 => Ok(b.clone()),
                i => f64_to_ratio((la + (lb - la) * i as f64 / (count - 1) as f64).exp())
                    .ok_or_else(|| "modulus out of range".to_string()),
            })
            .collect();
    }
    Ok((0..count)
        .map(|i| &a + (&b - &a) * BigRational::from_integer((i as i64).into()) / &last)
        .collect())
}

/// Decimal or rational, or a multiple of `pi`: `pi`, `2pi`, `-pi/2`, `3pi/4`.
pub fn phase_value(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let bad = || format!("invalid phase {:?}", text);
    let Some(at) = t.find("pi") else {
        return parse_rational(t).and_then(|r| r.to_f64()).ok_or_else(bad);
    };
    let coef = match &t[..at] {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => parse_rational(c.trim_end_matches('*')).and_then(|r| r.to_f64()).ok_or_else(bad)?,
    };
    let rest = &t[at + 2..];
    let div = match rest.strip_prefix('/') {
        Some(d) => parse_rational(d).and_then(|r| r.to_f64()).filter(|d| *d != 0.0).ok_or_else(bad)?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    Ok(coef * PI / div)
}

/// `a..b:steps` (half-open, so `0..2pi` does not repeat 0) or `v1|v2|...`.
fn phase_axis(body: &str) -> Result<Vec<f64>, String> {
    if !body.contains("..") {
        return body.split('|').map(phase_value).collect();
    }
    let (range, count) = body.split_once(':').ok_or("phase range needs a step count")?;
    let count = steps(count)?;
    let (a, b) = range.split_once("..").ok_or("phase range needs a..b")?;
    let (a, b) = (phase_value(a)?, phase_value(b)?);
    Ok((0..count).map(|i| a + (b - a) * i as f64 / count as f64).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    entries: Vec<[Value; 2]>,
}

fn entry(v: &Value) -> Result<BigRational, String> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(format!("matrix entry {} is neither a number nor a string", other)),
    };
    parse_rational(&text).ok_or_else(|| format!("invalid matrix entry {:?}", text))
}

/// Reads `{"dim": n, "entries": [[re, im], ...]}`, row-major. Numbers are
/// taken at their decimal value; strings may hold rationals like `"1/3"`.
pub fn read_matrix(path: &Path, float: bool) -> Result<DenseOperator, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read stdin: {}", e)))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))?
    };
    let bad = |msg: String| Failure::Usage(format!("{}: {}", path.display(), msg));
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if file.dim == 0 {
        return Err(bad("dim must be at least 1".into()));
    }
    if file.entries.len() != file.dim * file.dim {
        return Err(bad(format!("expected {} entries for dim {}, found {}", file.dim * file.dim, file.dim, file.entries.len())));
    }
    let mut values = Vec::with_capacity(file.entries.len());
    for [re, im] in &file.entries {
        values.push(num_complex::Complex::new(entry(re).map_err(&bad)?, entry(im).map_err(&bad)?));
    }
    let q = xeig_core::QMatrix::from_vec(file.dim, file.dim, values);
    Ok(if float { DenseOperator::Float(q.to_float()) } else { DenseOperator::Exact(q) })
}
