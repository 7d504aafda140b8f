//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.
//!
//! Boundedness oracle used by criterion 4: `s_n = |λ|^{-n} β(n−k+1, n)` is
//! evaluated in log space for `|n| ≤ 4000` from the weights alone; a side
//! counts as unbounded when `ln s` grows by more than 1 between `|n| = 2000`
//! and `|n| = 4000`. Sweep moduli stay at least 3% (in log) away from every
//! critical radius, so a bounded side changes by `O(k ln n)` at most while an
//! unbounded one grows by more than 60.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use xeig_core::matrix::{
    matrix_sigma, orbit_distance, sample_similarity_orbit, sylvester_membership, witness_residual, Membership,
    SylvesterOptions, DEFAULT_TOL,
};
use xeig_core::shift::{
    annulus, build_shift_witness, power_norm, quasinilpotence_profile, shift_membership, verify_intertwining,
    AnnulusShape, Mode, Radius, Status, DEFAULT_QN_THRESHOLD,
};
use xeig_core::volterra::{discretize_volterra, shifted_volterra_sigma, volterra_membership_evidence, Scheme};
use xeig_core::weights::parse_family;
use xeig_core::{DenseOperator, ExactScalar, Lambda, QMatrix, SigmaKind, WeightFamily};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn harmonic() -> WeightFamily {
    WeightFamily::power_law(q(1, 1))
}

fn c1_factorial_norms() -> Outcome {
    let start = Instant::now();
    for k in 1..=30u64 {
        let expected = if k % 2 == 1 {
            let m = fact(k.div_ceil(2));
            BigRational::new(BigInt::one(), &m * &m)
        } else {
            BigRational::new(BigInt::one(), fact(k / 2) * fact(k / 2 + 1))
        };
        let got = power_norm(&harmonic(), k, 2 * k).map_err(|e| e.to_string())?;
        ensure!(got == ExactScalar::Exact(expected.clone()), "k = {}: {:?} != {}", k, got, expected);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {:.3} s", secs);
    Ok(format!("k = 1..30 exact, {:.3} s", secs))
}

fn c2_quasinilpotence() -> Outcome {
    let ln = (fact(20) * fact(21)).to_f64().unwrap().ln();
    let oracle = (-ln / 40.0).exp();
    let p = quasinilpotence_profile(&harmonic(), 60, DEFAULT_QN_THRESHOLD).map_err(|e| e.to_string())?;
    let r40 = p.roots[39];
    ensure!((oracle - 0.1116).abs() <= 1e-3, "oracle {} off 0.1116", oracle);
    ensure!((r40 - 0.1116).abs() <= 1e-3, "root at k=40 is {}", r40);
    ensure!((r40 - oracle).abs() <= 1e-12, "root {} vs oracle {}", r40, oracle);
    for k in 3..60 {
        ensure!(p.roots[k] <= p.roots[k - 1], "roots increase at k = {}", k + 1);
    }
    ensure!(p.quasinilpotent, "verdict false");
    Ok(format!("root(40) = {:.6}, oracle {:.6}, nonincreasing k = 3..60", r40, oracle))
}

fn c3_circle_law() -> Outcome {
    let moduli = [q(1, 2), q(9, 10), q(1, 1), q(11, 10), q(2, 1)];
    let mut count = 0;
    for m in &moduli {
        for j in 0..20 {
            let lam = Lambda::polar(m.clone(), 2.0 * PI * j as f64 / 20.0);
            let v = shift_membership(&harmonic(), &lam, 20, Mode::Analytic).map_err(|e| e.to_string())?;
            let want = if m.is_one() { Status::In } else { Status::Out };
            ensure!(v.status == want, "|λ| = {}, phase {}: {:?}", m, j, v.status);
            count += 1;
        }
    }
    Ok(format!("{} points, In exactly on |λ| = 1", count))
}

/// `ln |λ|^{-n} β(n−k+1, n)` has bounded growth at both ends for some `k ≤ k_max`.
fn brute_force_member(f: &WeightFamily, r: f64, k_max: i64) -> bool {
    if r == 0.0 {
        return false;
    }
    const M: i64 = 4000;
    let lw: Vec<f64> = (-M - k_max..=M).map(|j| f.ln_weight(j).unwrap()).collect();
    let mut prefix = vec![0.0];
    for x in &lw {
        prefix.push(prefix.last().unwrap() + x);
    }
    // sum of ln w_j over j in [a, b]
    let sum = |a: i64, b: i64| prefix[(b + M + k_max + 1) as usize] - prefix[(a + M + k_max) as usize];
    (0..=k_max).any(|k| {
        let ln_s = |n: i64| -(n as f64) * r.ln() + sum(n - k + 1, n);
        ln_s(M) - ln_s(M / 2) <= 1.0 && ln_s(-M) - ln_s(-M / 2) <= 1.0
    })
}

fn sweep_against_oracle(f: &WeightFamily, unit_points: usize) -> Result<usize, String> {
    let mut mismatches = 0;
    for i in 0..50 {
        let (r, phase) = if i < unit_points {
            (1.0, 2.0 * PI * i as f64 / unit_points as f64)
        } else {
            (2f64.powf(-6.0 + (i as f64 + 0.5) * 0.24), 0.7 * i as f64)
        };
        let lam = Lambda::float(r * phase.cos(), r * phase.sin());
        let v = shift_membership(f, &lam, 20, Mode::Analytic).map_err(|e| e.to_string())?;
        let want = brute_force_member(f, lam.modulus(), 20);
        if (v.status == Status::In) != want {
            mismatches += 1;
        }
    }
    let zero = shift_membership(f, &Lambda::float(0.0, 0.0), 20, Mode::Analytic).map_err(|e| e.to_string())?;
    ensure!(zero.status == Status::Out, "λ = 0 reported {:?}", zero.status);
    Ok(mismatches)
}

fn c4_annulus() -> Outcome {
    let two_sided = WeightFamily::exp_tail(q(1, 2), q(1, 2));
    let r = annulus(&two_sided, 20).map_err(|e| e.to_string())?;
    ensure!(r.c == Radius::Finite(BigRational::zero()) && r.d == Radius::Infinite, "c = {}, d = {}", r.c, r.d);
    ensure!(r.shape == AnnulusShape::OpenOpen, "shape {}", r.shape.name());
    let one_sided = parse_family("piecewise:split=0,neg=[constant:value=1],pos=[exptail:pos=1/2,neg=1]").map_err(|e| e.to_string())?;
    let s = annulus(&one_sided, 20).map_err(|e| e.to_string())?;
    ensure!(s.c == Radius::Finite(BigRational::zero()) && s.d == Radius::Finite(BigRational::one()), "c = {}, d = {}", s.c, s.d);
    ensure!(s.shape == AnnulusShape::OpenClosed, "shape {}", s.shape.name());
    let m1 = sweep_against_oracle(&two_sided, 0)?;
    let m2 = sweep_against_oracle(&one_sided, 5)?;
    ensure!(m1 == 0 && m2 == 0, "sweep disagreements: {} and {}", m1, m2);
    Ok("ExpTail(1/2,1/2) c=0 d=inf open-open; one-sided c=0 d=1 open-closed; 2x50 sweeps agree".into())
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=4, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn base() -> impl Strategy<Value = BigRational> {
    prop_oneof![Just(q(1, 2)), Just(q(1, 3)), Just(q(2, 3)), Just(q(3, 4)), Just(q(1, 1))]
}

fn simple_family() -> impl Strategy<Value = WeightFamily> {
    prop_oneof![
        (1i64..=2).prop_map(|a| WeightFamily::power_law(q(a, 1))),
        small_rational().prop_map(WeightFamily::constant),
        (base(), base()).prop_map(|(p, n)| WeightFamily::exp_tail(p, n)),
    ]
}

fn family() -> impl Strategy<Value = WeightFamily> {
    prop_oneof![
        3 => simple_family(),
        1 => (simple_family(), simple_family(), -3i64..=3).prop_map(|(a, b, s)| WeightFamily::piecewise(a, b, s)),
        1 => (proptest::collection::btree_map(-3i64..=3, small_rational(), 1..4), simple_family())
            .prop_map(|(values, tail)| WeightFamily::table(values, tail)),
    ]
}

fn lambda() -> impl Strategy<Value = Lambda> {
    let unit = prop_oneof![Just((3, 4, 5)), Just((5, 12, 13)), Just((8, 15, 17)), Just((1, 0, 1)), Just((0, 1, 1))];
    prop_oneof![
        (unit, any::<bool>(), any::<bool>()).prop_map(|((a, b, c), sa, sb)| {
            let s = |neg: bool| if neg { -1 } else { 1 };
            Lambda::rational(q(s(sa) * a, c), q(s(sb) * b, c))
        }),
        (-8i64..=8, -8i64..=8, 1i64..=4).prop_map(|(a, b, d)| Lambda::rational(q(a, d), q(b, d))),
    ]
}

fn c5_witness_soundness() -> Outcome {
    let config = Config { cases: 100, max_global_rejects: 100_000, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let result = runner.run(&(family(), lambda(), 3u64..=7), |(f, lam, w)| {
        let v = shift_membership(&f, &lam, 20, Mode::Analytic).unwrap();
        if v.status != Status::In {
            return Err(TestCaseError::reject("not In"));
        }
        let k = v.witness_k.unwrap();
        let window = w.max(k + 2);
        let x = build_shift_witness(&f, &lam, k, window).unwrap();
        prop_assert!(x.is_exact());
        prop_assert!(!x.as_exact().unwrap().is_zero());
        let r = verify_intertwining(&x, &f, &lam, window).unwrap();
        prop_assert!(r.exact_arithmetic && r.exact_pass && r.interior_residual == 0.0, "{} λ={} k={}", f, lam, k);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok("100 In triples, all witnesses verified exactly".into())
}

fn random_pick<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items[(rng.next_u64() % items.len() as u64) as usize].clone()
}

type Qc = Complex<BigRational>;

fn qc(r: BigRational) -> Qc {
    Complex::new(r, BigRational::zero())
}

fn qmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, l| acc + &a[i][l] * &b[l][j])).collect())
        .collect()
}

/// Inverse of a unit triangular integer matrix by substitution.
fn unit_triangular_inverse(t: &[Vec<BigRational>], lower: bool) -> Vec<Vec<BigRational>> {
    let n = t.len();
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        let order: Vec<usize> = if lower { (0..n).collect() } else { (0..n).rev().collect() };
        for &i in &order {
            let mut s = if i == col { BigRational::one() } else { BigRational::zero() };
            for &l in &order {
                if l == i {
                    break;
                }
                s -= &t[i][l] * &inv[l][col];
            }
            inv[i][col] = s;
        }
    }
    inv
}

/// `P D P⁻¹` with unimodular `P = LU` and upper-triangular `D`; returns the
/// matrix and its diagonal (the exact spectrum).
fn random_similar_triangular(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let pool = [q(-3, 1), q(-2, 1), q(-1, 1), q(-1, 2), q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1), q(4, 1), q(0, 1)];
    let diag: Vec<BigRational> = (0..n).map(|_| random_pick(rng, &pool)).collect();
    let small = [q(-2, 1), q(-1, 1), q(0, 1), q(1, 1), q(2, 1)];
    let mut d = vec![vec![BigRational::zero(); n]; n];
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut u = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        d[i][i] = diag[i].clone();
        l[i][i] = BigRational::one();
        u[i][i] = BigRational::one();
        for j in 0..n {
            // equal diagonal values are never coupled directly; chains through
            // another value can still leave D defective
            if j > i && diag[i] != diag[j] {
                d[i][j] = random_pick(rng, &small);
            }
            if j < i {
                l[i][j] = random_pick(rng, &small);
            }
            if j > i {
                u[i][j] = random_pick(rng, &small);
            }
        }
    }
    let p = qmul(&l, &u);
    let p_inv = qmul(&unit_triangular_inverse(&u, false), &unit_triangular_inverse(&l, true));
    debug_assert!(qmul(&p, &p_inv).iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == if i == j { BigRational::one() } else { BigRational::zero() })));
    (qmul(&qmul(&p, &d), &p_inv), diag)
}

fn c6_matrix_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = SylvesterOptions::default();
    let grid: Vec<Lambda> = [(-3, 1), (-1, 1), (-1, 2), (1, 3), (2, 3), (5, 2), (7, 1)]
        .iter()
        .map(|&(a, b)| Lambda::real(q(a, b)))
        .chain([Lambda::rational(q(1, 1), q(1, 1)), Lambda::rational(q(0, 1), q(1, 2))])
        .collect();
    let (mut checks, mut disagreements, mut singular) = (0, 0, 0);
    let mut examples = Vec::new();
    for case in 0..100 {
        let n = 2 + (rng.next_u64() % 3) as usize;
        let (t, diag) = random_similar_triangular(&mut rng, n);
        let op = DenseOperator::Exact(QMatrix::from_fn(n, n, |i, j| qc(t[i][j].clone())));
        let sigma = matrix_sigma(&op, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let has_zero = diag.iter().any(|d| d.is_zero());
        singular += has_zero as usize;
        ensure!((sigma.kind == SigmaKind::AllOfC) == has_zero, "case {}: kind {:?}", case, sigma.kind);
        let mut candidates: Vec<BigRational> = Vec::new();
        for mu in &diag {
            for nu in diag.iter().filter(|v| !v.is_zero()) {
                candidates.push(mu / nu);
            }
        }
        candidates.sort();
        candidates.dedup();
        let lambdas = candidates.iter().map(|r| Lambda::real(r.clone())).chain(grid.iter().cloned());
        for lam in lambdas {
            let exact = sylvester_membership(&op, &lam, &opts).map_err(|e| e.to_string())?;
            let float_in = sigma.contains(lam.to_complex());
            checks += 1;
            if (exact.status == Membership::In) != float_in {
                disagreements += 1;
                examples.push(format!("case {} at λ = {}", case, lam));
            }
        }
        // every reported value sits on an exact ratio
        for v in &sigma.values {
            let near = candidates.iter().any(|c| (Complex64::new(c.to_f64().unwrap(), 0.0) - v).norm() <= 1e-6 * v.norm().max(1.0));
            if !near {
                disagreements += 1;
                examples.push(format!("case {} reports {}", case, v));
            }
        }
    }
    // unstructured entries: ratios are generically irrational, so 1 is
    // usually the only rational member
    let entries = [q(-3, 1), q(-1, 1), q(-1, 2), q(0, 1), q(1, 3), q(1, 1), q(2, 1), q(5, 2)];
    for case in 100..150 {
        let n = 2 + (rng.next_u64() % 3) as usize;
        let op = DenseOperator::from_rationals(n, (0..n * n).map(|_| random_pick(&mut rng, &entries)).collect());
        let sigma = matrix_sigma(&op, DEFAULT_TOL).map_err(|e| e.to_string())?;
        for lam in grid.iter().cloned().chain([Lambda::real(q(1, 1))]) {
            let exact = sylvester_membership(&op, &lam, &opts).map_err(|e| e.to_string())?;
            checks += 1;
            if (exact.status == Membership::In) != sigma.contains(lam.to_complex()) {
                disagreements += 1;
                examples.push(format!("case {} at λ = {}", case, lam));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(disagreements == 0, "{} disagreements in {} checks: {}", disagreements, checks, examples.join("; "));
    ensure!(secs < 30.0, "took {:.1} s", secs);
    Ok(format!(
        "100 triangularizable matrices ({} singular) + 50 unstructured, {} λ checks, 0 disagreements, {:.2} s",
        singular, checks, secs
    ))
}

fn c7_nilpotent() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let small = [q(-2, 1), q(-1, 1), q(0, 1), q(1, 2), q(1, 1), q(3, 1)];
    for case in 0..20 {
        let n = 2 + (rng.next_u64() % 5) as usize;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if j > i { random_pick(&mut rng, &small) } else { BigRational::zero() });
            }
        }
        let t = DenseOperator::from_rationals(n, entries);
        let sigma = matrix_sigma(&t, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure!(sigma.kind == SigmaKind::AllOfC, "case {}: {:?}", case, sigma.kind);
        let tq = t.as_exact().unwrap();
        if tq.is_zero() {
            continue;
        }
        // last non-zero power
        let mut x = tq.clone();
        while !x.matmul(tq).is_zero() {
            x = x.matmul(tq);
        }
        let x = DenseOperator::Exact(x);
        for lam in [Lambda::real(q(17, 1)), Lambda::rational(q(-2, 3), q(5, 1)), Lambda::real(q(0, 1))] {
            let r = witness_residual(&t, &x, &lam).map_err(|e| e.to_string())?;
            ensure!(r.exact && r.residual == 0.0 && !r.zero_witness, "case {}: residual {}", case, r.residual);
        }
    }
    Ok("20 strictly triangular matrices: AllOfC, power witnesses exact with residual 0".into())
}

fn c8_similarity() -> Outcome {
    let t = DenseOperator::diagonal(&[q(1, 1), q(2, 1), q(4, 1)]);
    let expected: Vec<Complex64> = [0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let samples = sample_similarity_orbit(&t, 50, 100.0, 42).map_err(|e| e.to_string())?;
    ensure!(samples.len() == 50, "{} samples", samples.len());
    let mut worst: f64 = 0.0;
    for (i, s) in samples.iter().enumerate() {
        let sigma = matrix_sigma(s, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure!(sigma.kind == SigmaKind::FiniteSet && sigma.values.len() == 5, "sample {}: {:?}", i, sigma.values);
        for (a, b) in sigma.values.iter().zip(&expected) {
            let err = (a - b).norm() / b.norm();
            worst = worst.max(err);
            ensure!(err <= 1e-8, "sample {}: {} vs {}", i, a, b);
        }
    }
    Ok(format!("50 conjugates, worst relative error {:.1e}", worst))
}

fn c9_volterra_evidence() -> Outcome {
    let start = Instant::now();
    let n_list = [64, 128, 256, 512];
    let mut notes = Vec::new();
    for (a, b) in [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1)] {
        let lam = Lambda::real(q(a, b));
        let ev = volterra_membership_evidence(&lam, &n_list).map_err(|e| e.to_string())?;
        if a == b {
            ensure!(ev.residuals.iter().all(|r| r.1 == 0.0), "λ = 1 residuals {:?}", ev.residuals);
            notes.push("λ=1 exact 0".to_string());
            continue;
        }
        for &(n, r) in &ev.residuals {
            ensure!(r <= 5.0 / n as f64, "λ = {}/{}, N = {}: residual {}", a, b, n, r);
        }
        for w in ev.residuals.windows(2) {
            ensure!(w[1].1 <= w[0].1, "λ = {}/{}: residual increases at N = {}", a, b, w[1].0);
        }
        let order = ev.convergence_order.ok_or("no order")?;
        ensure!(order >= 0.9, "λ = {}/{}: order {}", a, b, order);
        notes.push(format!("λ={}/{} order {:.3}", a, b, order));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {:.1} s", secs);
    Ok(format!("{}; {:.2} s", notes.join(", "), secs))
}

fn c10_degeneracy() -> Outcome {
    for n in [4, 8, 16] {
        let v = discretize_volterra(n, Scheme::Rectangle).map_err(|e| e.to_string())?;
        ensure!(v.to_exact().pow(n).is_zero(), "V_{}^{} != 0", n, n);
        for op in [v.matrix(), DenseOperator::Float(v.to_float())] {
            let sigma = matrix_sigma(&op, DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure!(sigma.kind == SigmaKind::AllOfC, "N = {}: {:?}", n, sigma.kind);
        }
    }
    Ok("V_N^N = 0 and AllOfC for N = 4, 8, 16".into())
}

fn c11_shifted() -> Outcome {
    for gamma in [Lambda::real(q(1, 1)), Lambda::rational(q(3, 1), q(2, 1))] {
        for n in [8, 16] {
            let s = shifted_volterra_sigma(&gamma, n).map_err(|e| e.to_string())?;
            ensure!(
                s.kind == SigmaKind::FiniteSet && s.values == vec![Complex64::new(1.0, 0.0)],
                "γ = {}, N = {}: {:?}",
                gamma,
                n,
                s
            );
        }
    }
    Ok("Σ(γI + V_N) = {1} for γ = 1, 3+2i and N = 8, 16".into())
}

fn c12_orbit_evidence(substitutes_pass: bool) -> Outcome {
    let a = DenseOperator::jordan_nilpotent(4);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut entries = vec![BigRational::zero(); 16];
    for i in 1..4 {
        for j in 0..i {
            let v = (rng.next_u64() % 5) as i64 - 2;
            entries[i * 4 + j] = if j + 1 == i && v == 0 { q(1, 1) } else { q(v, 1) };
        }
    }
    let b = DenseOperator::from_rationals(4, entries);
    let d = orbit_distance(&a, &b, 400, 100.0, 12).map_err(|e| e.to_string())?;
    let marks: Vec<String> = [1, 10, 24, 50, 100, 200, 400]
        .iter()
        .map(|&s| format!("{}:{:.4}", s, d.curve[s - 1]))
        .collect();
    println!("    orbit_distance(J4, strictly lower nilpotent) samples:distance {}", marks.join(" "));
    ensure!(substitutes_pass, "substitute criteria 3, 4, 11 did not all pass");
    Ok("not reproducible (nonconstructive existence); substitutes 3, 4, 11 pass; orbit curve emitted unasserted".into())
}

fn report(id: usize, name: &str, outcome: Outcome) -> bool {
    let ok = outcome.is_ok();
    let (tag, msg) = match outcome {
        Ok(m) => ("PASS", m),
        Err(m) => ("FAIL", m),
    };
    println!("criterion {:>2} {} {:<27} {}", id, tag, name, msg);
    ok
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("factorial norm formula", c1_factorial_norms),
        ("quasinilpotence decay", c2_quasinilpotence),
        ("circle law", c3_circle_law),
        ("annulus shapes", c4_annulus),
        ("witness soundness", c5_witness_soundness),
        ("matrix oracle equivalence", c6_matrix_oracle),
        ("nilpotent rule", c7_nilpotent),
        ("similarity invariance", c8_similarity),
        ("volterra evidence", c9_volterra_evidence),
        ("documented degeneracy", c10_degeneracy),
        ("shifted volterra", c11_shifted),
    ];
    let mut passed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        passed.push(report(i + 1, name, outcome));
    }
    let substitutes = passed[2] && passed[3] && passed[10];
    passed.push(report(12, "headline theorem substitute", c12_orbit_evidence(substitutes)));
    let failures = passed.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {} failed", passed.len() - failures, failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
