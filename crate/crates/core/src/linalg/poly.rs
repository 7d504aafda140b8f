//! Exact characteristic polynomials over `Q(i)`.
//!
//! A defective eigenvalue of multiplicity `m` moves by about `ε^{1/m}` under
//! rounding, so double-precision spectra of exact matrices with Jordan blocks
//! cannot be clustered at tight tolerances. The square-free part of the
//! characteristic polynomial has the same roots, all simple, and those are
//! found to working precision.

use alloc::vec::Vec;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{eigenvalues, CMatrix, QMatrix};
use crate::error::Result;
use crate::scalar::ratio_to_f64;

type Qc = Complex<BigRational>;

/// Coefficients `c_0, …, c_n` of `det(zI − A)` (so `c_n = 1`), by the
/// Faddeev–LeVerrier recurrence.
pub fn charpoly_exact(a: &QMatrix) -> Vec<Qc> {
    let n = a.rows();
    let mut c = alloc::vec![Qc::zero(); n + 1];
    c[n] = Qc::one();
    let mut m = QMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.matmul(&m);
        for i in 0..n {
            m[(i, i)] = m[(i, i)].clone() + c[n - k + 1].clone();
        }
        let am = a.matmul(&m);
        let trace = (0..n).fold(Qc::zero(), |acc, i| acc + am[(i, i)].clone());
        c[n - k] = -trace / Qc::new(BigRational::from_integer((k as i64).into()), BigRational::zero());
    }
    c
}

fn trim(mut p: Vec<Qc>) -> Vec<Qc> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn monic(p: Vec<Qc>) -> Vec<Qc> {
    let lead = p.last().cloned().unwrap_or_else(Qc::one);
    p.into_iter().map(|c| c / lead.clone()).collect()
}

/// Quotient and remainder of `a / b`, `b` non-zero.
fn divmod(a: &[Qc], b: &[Qc]) -> (Vec<Qc>, Vec<Qc>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return (alloc::vec![Qc::zero()], r);
    }
    let lead = b[db].clone();
    let mut quot = alloc::vec![Qc::zero(); r.len() - db];
    for i in (0..quot.len()).rev() {
        let coef = r[i + db].clone() / lead.clone();
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = r[i + j].clone() - coef.clone() * bj.clone();
        }
        quot[i] = coef;
    }
    r.truncate(db.max(1));
    (quot, trim(r))
}

fn is_zero_poly(p: &[Qc]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn gcd(a: &[Qc], b: &[Qc]) -> Vec<Qc> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&b) {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn derivative(p: &[Qc]) -> Vec<Qc> {
    if p.len() <= 1 {
        return alloc::vec![Qc::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * Qc::new(BigRational::from_integer((k as i64).into()), BigRational::zero()))
        .collect()
}

/// Monic polynomial with the same roots as `p`, each simple.
pub fn square_free_part(p: &[Qc]) -> Vec<Qc> {
    let g = gcd(p, &derivative(p));
    monic(divmod(p, &g).0)
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a polynomial with simple roots: companion eigenvalues polished
/// by Newton steps that never increase `|p|`.
pub fn simple_roots(p: &[Qc]) -> Result<Vec<Complex64>> {
    let p = monic(trim(p.to_vec()));
    let d = p.len() - 1;
    let pf: Vec<Complex64> = p.iter().map(|c| Complex64::new(ratio_to_f64(&c.re), ratio_to_f64(&c.im))).collect();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(alloc::vec![-pf[0]]);
    }
    let companion = CMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -pf[i]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut roots = eigenvalues(&companion)?;
    for z in roots.iter_mut() {
        for _ in 0..16 {
            let (v, dv) = horner(&pf, *z);
            if v.norm() == 0.0 || dv.norm() == 0.0 {
                break;
            }
            let next = *z - v / dv;
            if horner(&pf, next).0.norm() >= v.norm() {
                break;
            }
            *z = next;
        }
    }
    Ok(roots)
}

/// Distinct eigenvalues of an exact matrix: read off the diagonal of a
/// triangular matrix, otherwise the simple roots of the square-free part of
/// the characteristic polynomial.
pub fn exact_distinct_eigenvalues(a: &QMatrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if a.is_upper_triangular() || a.is_lower_triangular() {
        let mut diag: Vec<Qc> = Vec::with_capacity(n);
        for i in 0..n {
            if !diag.contains(&a[(i, i)]) {
                diag.push(a[(i, i)].clone());
            }
        }
        return Ok(diag.iter().map(|z| Complex64::new(ratio_to_f64(&z.re), ratio_to_f64(&z.im))).collect());
    }
    simple_roots(&square_free_part(&charpoly_exact(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn real(v: &[i64]) -> Vec<Qc> {
        v.iter().map(|&x| Qc::new(int(x), BigRational::zero())).collect()
    }

    #[test]
    fn charpoly_of_small_matrices() {
        // [[1,2],[3,4]]: z² − 5z − 2
        let a = QMatrix::from_rationals(2, 2, alloc::vec![int(1), int(2), int(3), int(4)]);
        assert_eq!(charpoly_exact(&a), real(&[-2, -5, 1]));
        let j = QMatrix::from_rationals(3, 3, alloc::vec![int(2), int(1), int(0), int(0), int(2), int(1), int(0), int(0), int(2)]);
        assert_eq!(charpoly_exact(&j), real(&[-8, 12, -6, 1]));
    }

    #[test]
    fn square_free_of_jordan_block() {
        let p = real(&[-8, 12, -6, 1]); // (z − 2)³
        assert_eq!(square_free_part(&p), real(&[-2, 1]));
        let p = real(&[4, -8, 5, -1]).into_iter().map(|c| -c).collect::<Vec<_>>(); // (z − 1)(z − 2)²
        assert_eq!(square_free_part(&p), real(&[2, -3, 1]));
    }

    #[test]
    fn defective_similar_matrix_has_accurate_roots() {
        // P J P⁻¹ with J = diag block (3/2 Jordan 2, −3), P unimodular
        let t = QMatrix::from_rationals(
            3,
            3,
            alloc::vec![int(1), int(2), int(1), int(0), int(1), int(3), int(0), int(0), int(1)],
        );
        let j = QMatrix::from_rationals(
            3,
            3,
            alloc::vec![frac(3, 2), int(1), int(0), int(0), frac(3, 2), int(0), int(0), int(0), int(-3)],
        );
        let t_inv = QMatrix::from_rationals(
            3,
            3,
            alloc::vec![int(1), int(-2), int(5), int(0), int(1), int(-3), int(0), int(0), int(1)],
        );
        assert!(t.matmul(&t_inv).sub(&QMatrix::identity(3)).is_zero());
        let a = t.matmul(&j).matmul(&t_inv);
        let mut roots = exact_distinct_eigenvalues(&a).unwrap();
        roots.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - Complex64::new(-3.0, 0.0)).norm() < 1e-14);
        assert!((roots[1] - Complex64::new(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_roots() {
        // z² + 1
        let p = real(&[1, 0, 1]);
        let mut r = simple_roots(&p).unwrap();
        r.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
