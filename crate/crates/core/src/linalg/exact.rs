//! Fraction-free (Bareiss) elimination over the Gaussian integers.
//!
//! Rows of a `Q(i)` matrix are first scaled by the lcm of their
//! denominators, which changes neither rank nor kernel. Every intermediate
//! entry is then a minor of the scaled matrix, so each division is exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::QMatrix;

type GaussInt = Complex<BigInt>;

struct Echelon {
    rows: Vec<Vec<GaussInt>>,
    pivots: Vec<usize>,
    cols: usize,
}

fn to_gaussian_rows(m: &QMatrix) -> Vec<Vec<GaussInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()));
            row.iter()
                .map(|z| {
                    let re = (&z.re * BigRational::from_integer(lcm.clone())).to_integer();
                    let im = (&z.im * BigRational::from_integer(lcm.clone())).to_integer();
                    Complex::new(re, im)
                })
                .collect()
        })
        .collect()
}

fn exact_div(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let norm = &b.re * &b.re + &b.im * &b.im;
    let num = a * b.conj();
    let (re, r1) = num.re.div_rem(&norm);
    let (im, r2) = num.im.div_rem(&norm);
    debug_assert!(r1.is_zero() && r2.is_zero(), "Bareiss division must be exact");
    Complex::new(re, im)
}

fn echelon(m: &QMatrix) -> Echelon {
    let mut a = to_gaussian_rows(m);
    let nrows = m.rows();
    let ncols = m.cols();
    let mut prev = GaussInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = exact_div(&v, &prev);
            }
            row[c] = GaussInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, cols: ncols }
}

/// Rank over `Q(i)`.
pub fn exact_rank(m: &QMatrix) -> usize {
    echelon(m).pivots.len()
}

/// A non-zero kernel vector, or `None` when the columns are independent.
pub fn exact_kernel_vector(m: &QMatrix) -> Option<Vec<Complex<BigRational>>> {
    let e = echelon(m);
    let free = (0..e.cols).find(|c| !e.pivots.contains(c))?;
    let zero = Complex::new(BigRational::zero(), BigRational::zero());
    let mut x = alloc::vec![zero; e.cols];
    x[free] = Complex::new(BigRational::one(), BigRational::zero());
    let lift = |z: &GaussInt| Complex::new(BigRational::from_integer(z.re.clone()), BigRational::from_integer(z.im.clone()));
    for (row, &pc) in e.rows.iter().zip(&e.pivots).rev() {
        let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
        for j in pc + 1..e.cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += lift(&row[j]) * x[j].clone();
            }
        }
        x[pc] = -acc / lift(&row[pc]);
    }
    Some(x)
}
