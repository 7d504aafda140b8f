use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use xeig_core::matrix::{
    matrix_sigma, orbit_distance, sample_similarity_orbit, sylvester_membership, witness_residual, Membership,
    OracleRoute, SylvesterOptions,
};
use xeig_core::shift::{
    annulus, argmax_beta, build_shift_witness, power_norm, quasinilpotence_profile, required_window,
    sampled_membership, shift_membership, verify_intertwining, Mode, ProfileBasis, SigmaVerdict, Status,
};
use xeig_core::volterra::{
    constrained_residual_probe, discretize_volterra, shifted_volterra_sigma, volterra_membership_evidence,
    ProbeOptions, Scheme, Termination,
};
use xeig_core::weights::render_family;
use xeig_core::{DenseOperator, ExactScalar, Lambda, MatrixSigmaSet, SigmaKind, WeightFamily};

use crate::args::{Command, MatrixCommand, ModeArg, SchemeArg, ShiftCommand, SweepArgs, VolterraCommand};
use crate::parse::read_matrix;
use crate::report::Report;
use crate::Failure;

#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

fn cx(z: Complex64) -> Cx {
    Cx { re: z.re, im: z.im }
}

#[derive(Serialize)]
struct LambdaJson {
    re: f64,
    im: f64,
    text: String,
}

fn lambda_json(l: &Lambda) -> LambdaJson {
    let z = l.to_complex();
    LambdaJson { re: z.re, im: z.im, text: l.to_string() }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::In => "In",
        Status::Out => "Out",
        Status::Unknown => "Unknown",
    }
}

fn membership_name(m: Membership) -> &'static str {
    match m {
        Membership::In => "In",
        Membership::Out => "Out",
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Analytic => "analytic",
        Mode::Sampled => "sampled",
    }
}

fn scheme(s: SchemeArg) -> Scheme {
    match s {
        SchemeArg::Rectangle => Scheme::Rectangle,
        SchemeArg::Trapezoid => Scheme::Trapezoid,
    }
}

fn scheme_name(s: SchemeArg) -> &'static str {
    match s {
        SchemeArg::Rectangle => "rectangle",
        SchemeArg::Trapezoid => "trapezoid",
    }
}

/// Exact values as rational strings, others as numbers.
fn scalar_json(s: &ExactScalar) -> Value {
    match s.as_rational() {
        Some(r) => Value::String(r.to_string()),
        None => json!(s.to_f64()),
    }
}

fn matrix_json(op: &DenseOperator) -> Value {
    let entries: Vec<Value> = match op {
        DenseOperator::Exact(q) => q.data().iter().map(|z| json!([z.re.to_string(), z.im.to_string()])).collect(),
        DenseOperator::Float(c) => c.data().iter().map(|z| json!([z.re, z.im])).collect(),
    };
    json!({ "dim": op.dim(), "exact": op.is_exact(), "entries": entries })
}

#[derive(Serialize)]
struct SigmaJson {
    kind: &'static str,
    tolerance: f64,
    values: Vec<Cx>,
}

fn sigma_json(s: &MatrixSigmaSet) -> SigmaJson {
    SigmaJson {
        kind: match s.kind {
            SigmaKind::AllOfC => "AllOfC",
            SigmaKind::FiniteSet => "FiniteSet",
        },
        tolerance: s.tolerance,
        values: s.values.iter().copied().map(cx).collect(),
    }
}

pub fn execute(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Shift(c) => shift(c),
        Command::Matrix(c) => matrix(c),
        Command::Volterra(c) => volterra(c),
        Command::Sweep(a) => sweep(a),
    }
}

fn decide(f: &WeightFamily, l: &Lambda, kmax: u64, mode: ModeArg, horizon: u64) -> Result<SigmaVerdict, Failure> {
    Ok(match mode {
        ModeArg::Analytic => shift_membership(f, l, kmax, Mode::Analytic)?,
        ModeArg::Sampled => sampled_membership(f, l, kmax, horizon)?,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MemberReport {
    family: String,
    lambda: LambdaJson,
    status: &'static str,
    witness_k: Option<u64>,
    mode: &'static str,
    k_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon: Option<u64>,
    detail: String,
}

#[derive(Serialize)]
struct Radii {
    k: usize,
    c: String,
    d: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnnulusJson {
    family: String,
    k_max: u64,
    c_seq: Vec<String>,
    d_seq: Vec<String>,
    c: String,
    d: String,
    shape: &'static str,
    contains_unit_circle: bool,
    radii: Vec<Radii>,
}

#[derive(Serialize)]
struct NormRow {
    k: u64,
    window: u64,
    norm: Value,
    root: f64,
    argmax: Vec<i64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NormsReport {
    family: String,
    k_max: u64,
    exact: bool,
    norms: Vec<Value>,
    rows: Vec<NormRow>,
}

#[derive(Serialize)]
struct RootRow {
    k: usize,
    norm: Value,
    root: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProfileReport {
    family: String,
    k_max: u64,
    threshold: f64,
    quasinilpotent: bool,
    basis: &'static str,
    roots: Vec<f64>,
    rows: Vec<RootRow>,
}

#[derive(Serialize)]
struct Entry {
    row: i64,
    col: i64,
    re: Value,
    im: Value,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Verification {
    exact_pass: bool,
    exact_arithmetic: bool,
    interior_residual: f64,
    checked: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WitnessReport {
    family: String,
    lambda: LambdaJson,
    k: u64,
    window: u64,
    /// Rows and columns run over `-window..=window`.
    dim: usize,
    entries: Vec<Entry>,
    verification: Verification,
}

fn shift(c: ShiftCommand) -> Result<Report, Failure> {
    match c {
        ShiftCommand::Member { family, lambda, kmax, mode, horizon } => {
            let f = family.weights;
            let v = decide(&f, &lambda, kmax, mode, horizon)?;
            let body = MemberReport {
                family: render_family(&f),
                lambda: lambda_json(&lambda),
                status: status_name(v.status),
                witness_k: v.witness_k,
                mode: mode_name(v.mode),
                k_max: kmax,
                horizon: (mode == ModeArg::Sampled).then_some(horizon),
                detail: v.detail,
            };
            Ok(Report::new("shift-member", &body, None))
        }
        ShiftCommand::Annulus { family, kmax } => {
            let f = family.weights;
            let r = annulus(&f, kmax)?;
            let strings = |s: &[BigRational]| s.iter().map(ToString::to_string).collect::<Vec<_>>();
            let body = AnnulusJson {
                family: render_family(&f),
                k_max: kmax,
                c_seq: strings(&r.c_seq),
                d_seq: strings(&r.d_seq),
                c: r.c.to_string(),
                d: r.d.to_string(),
                shape: r.shape.name(),
                contains_unit_circle: r.contains_unit_circle,
                radii: r
                    .c_seq
                    .iter()
                    .zip(&r.d_seq)
                    .enumerate()
                    .map(|(k, (c, d))| Radii { k, c: c.to_string(), d: d.to_string() })
                    .collect(),
            };
            Ok(Report::new("shift-annulus", &body, Some("radii")))
        }
        ShiftCommand::Norms { family, kmax, exact, window } => {
            let f = family.weights;
            let rows = (1..=kmax)
                .into_par_iter()
                .map(|k| {
                    let w = window.unwrap_or_else(|| required_window(&f, k));
                    let norm = power_norm(&f, k, w)?;
                    let argmax = argmax_beta(&f, k, w)?;
                    let value = if exact {
                        match norm.as_rational() {
                            Some(r) => Value::String(r.to_string()),
                            None => {
                                return Err(Failure::Compute(format!("‖T^{}‖ has no exact value for this family", k)))
                            }
                        }
                    } else {
                        json!(norm.to_f64())
                    };
                    Ok(NormRow { k, window: w, norm: value, root: (norm.ln() / k as f64).exp(), argmax })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let body = NormsReport {
                family: render_family(&f),
                k_max: kmax,
                exact,
                norms: rows.iter().map(|r| r.norm.clone()).collect(),
                rows,
            };
            Ok(Report::new("shift-norms", &body, Some("rows")))
        }
        ShiftCommand::Quasinilpotence { family, kmax, threshold } => {
            let f = family.weights;
            let p = quasinilpotence_profile(&f, kmax, threshold)?;
            let body = ProfileReport {
                family: render_family(&f),
                k_max: kmax,
                threshold: p.threshold,
                quasinilpotent: p.quasinilpotent,
                basis: match p.basis {
                    ProfileBasis::Symbolic => "symbolic",
                    ProfileBasis::Evidence => "evidence",
                },
                roots: p.roots.clone(),
                rows: p
                    .norms
                    .iter()
                    .zip(&p.roots)
                    .enumerate()
                    .map(|(i, (n, &root))| RootRow { k: i + 1, norm: scalar_json(n), root })
                    .collect(),
            };
            Ok(Report::new("shift-quasinilpotence", &body, Some("rows")))
        }
        ShiftCommand::Witness { family, lambda, k, kmax, window } => {
            let f = family.weights;
            let k = match k {
                Some(k) => k,
                None => {
                    let v = shift_membership(&f, &lambda, kmax, Mode::Analytic)?;
                    match (v.status, v.witness_k) {
                        (Status::In, Some(k)) => k,
                        _ => return Err(Failure::Compute(format!("{} is not an extended eigenvalue: {}", lambda, v.detail))),
                    }
                }
            };
            let x = build_shift_witness(&f, &lambda, k, window)?;
            let check = verify_intertwining(&x, &f, &lambda, window)?;
            let w = window as i64;
            let dim = x.dim();
            let mut entries = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    let (re, im) = match &x {
                        DenseOperator::Exact(q) => {
                            let z = &q[(i, j)];
                            if z.re.is_zero() && z.im.is_zero() {
                                continue;
                            }
                            (Value::String(z.re.to_string()), Value::String(z.im.to_string()))
                        }
                        DenseOperator::Float(c) => {
                            let z = c[(i, j)];
                            if z.re == 0.0 && z.im == 0.0 {
                                continue;
                            }
                            (json!(z.re), json!(z.im))
                        }
                    };
                    entries.push(Entry { row: i as i64 - w, col: j as i64 - w, re, im });
                }
            }
            let body = WitnessReport {
                family: render_family(&f),
                lambda: lambda_json(&lambda),
                k,
                window,
                dim,
                entries,
                verification: Verification {
                    exact_pass: check.exact_pass,
                    exact_arithmetic: check.exact_arithmetic,
                    interior_residual: check.interior_residual,
                    checked: check.checked,
                },
            };
            Ok(Report::new("shift-witness", &body, Some("entries")))
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MatrixSigmaReport {
    dim: usize,
    exact_input: bool,
    #[serde(flatten)]
    sigma: SigmaJson,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MatrixMemberReport {
    dim: usize,
    lambda: LambdaJson,
    status: &'static str,
    route: &'static str,
    approximate: bool,
    smin: f64,
    witness: Option<Value>,
    residual: Option<f64>,
}

#[derive(Serialize)]
struct CurvePoint {
    sample: usize,
    distance: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OrbitDistanceReport {
    dim: usize,
    samples: u64,
    cond_max: f64,
    seed: u64,
    distance: f64,
    curve: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct Conjugate {
    index: usize,
    matrix: Value,
    sigma: SigmaJson,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OrbitReport {
    dim: usize,
    samples: u64,
    cond_max: f64,
    seed: u64,
    conjugates: Vec<Conjugate>,
}

fn route_name(r: OracleRoute) -> &'static str {
    match r {
        OracleRoute::Nilpotent => "nilpotent",
        OracleRoute::ExactRank => "exact-rank",
        OracleRoute::DenseSvd => "dense-svd",
        OracleRoute::Iterative => "iterative",
    }
}

fn matrix(c: MatrixCommand) -> Result<Report, Failure> {
    match c {
        MatrixCommand::Sigma { input, tol } => {
            let t = read_matrix(&input.input, input.float)?;
            let s = matrix_sigma(&t, tol)?;
            let body = MatrixSigmaReport { dim: t.dim(), exact_input: t.is_exact(), sigma: sigma_json(&s) };
            Ok(Report::new("matrix-sigma", &body, Some("values")))
        }
        MatrixCommand::Member { input, lambda, tol } => {
            let t = read_matrix(&input.input, input.float)?;
            let opts = SylvesterOptions { tol, ..SylvesterOptions::default() };
            let out = sylvester_membership(&t, &lambda, &opts)?;
            let residual = match &out.witness {
                Some(x) => Some(witness_residual(&t, x, &lambda)?.residual),
                None => None,
            };
            let body = MatrixMemberReport {
                dim: t.dim(),
                lambda: lambda_json(&lambda),
                status: membership_name(out.status),
                route: route_name(out.route),
                approximate: out.is_approximate(),
                smin: out.smin,
                witness: out.witness.as_ref().map(matrix_json),
                residual,
            };
            Ok(Report::new("matrix-member", &body, None))
        }
        MatrixCommand::Orbit { input, target, samples, cond_max, seed, tol } => {
            let t = read_matrix(&input.input, input.float)?;
            let seed = seed.expect("clap requires --seed");
            match target {
                Some(path) => {
                    let b = read_matrix(&path, input.float)?;
                    let d = orbit_distance(&t, &b, samples as usize, cond_max, seed)?;
                    let body = OrbitDistanceReport {
                        dim: t.dim(),
                        samples,
                        cond_max,
                        seed,
                        distance: d.distance,
                        curve: d.curve.iter().enumerate().map(|(i, &distance)| CurvePoint { sample: i + 1, distance }).collect(),
                    };
                    Ok(Report::new("matrix-orbit-distance", &body, Some("curve")))
                }
                None => {
                    let orbit = sample_similarity_orbit(&t, samples as usize, cond_max, seed)?;
                    let conjugates = orbit
                        .par_iter()
                        .enumerate()
                        .map(|(index, m)| {
                            Ok(Conjugate { index, matrix: matrix_json(m), sigma: sigma_json(&matrix_sigma(m, tol)?) })
                        })
                        .collect::<Result<Vec<_>, Failure>>()?;
                    let body = OrbitReport { dim: t.dim(), samples, cond_max, seed, conjugates };
                    Ok(Report::new("matrix-orbit", &body, None))
                }
            }
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProbePoint {
    n: usize,
    minimal_residual: f64,
    iterations: usize,
    termination: &'static str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProbeReport {
    lambda: LambdaJson,
    m: u32,
    k: u32,
    j: f64,
    scheme: &'static str,
    tol: f64,
    max_iter: usize,
    minimal_residual: f64,
    n_curve: Vec<ProbePoint>,
}

#[derive(Serialize)]
struct ResidualPoint {
    n: usize,
    residual: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvidenceReport {
    lambda: LambdaJson,
    convergence_order: Option<f64>,
    residuals: Vec<ResidualPoint>,
}

#[derive(Serialize)]
struct DiscretizeReport {
    n: usize,
    scheme: &'static str,
    h: String,
    matrix: Value,
}

#[derive(Serialize)]
struct ShiftedReport {
    gamma: LambdaJson,
    n: usize,
    #[serde(flatten)]
    sigma: SigmaJson,
}

fn volterra(c: VolterraCommand) -> Result<Report, Failure> {
    match c {
        VolterraCommand::Discretize { n, scheme: s } => {
            let v = discretize_volterra(n, scheme(s))?;
            let body = DiscretizeReport {
                n,
                scheme: scheme_name(s),
                h: BigRational::new(1.into(), (n as i64).into()).to_string(),
                matrix: matrix_json(&v.matrix()),
            };
            Ok(Report::new("volterra-discretize", &body, None))
        }
        VolterraCommand::Probe { lambda, n, n_list, scheme: s, m, k, j, tol, max_iter } => {
            let sizes = n_list.unwrap_or_default().into_iter().chain(n).collect::<Vec<_>>();
            let opts = ProbeOptions { tol, max_iter };
            let z = lambda.to_complex();
            let n_curve = sizes
                .par_iter()
                .map(|&n| {
                    let v = discretize_volterra(n, scheme(s))?;
                    let r = constrained_residual_probe(&v, z, m, k, j, &opts)?;
                    Ok(ProbePoint {
                        n,
                        minimal_residual: r.minimal_residual,
                        iterations: r.iterations,
                        termination: match r.termination {
                            Termination::Converged => "converged",
                            Termination::Boundary => "boundary",
                            Termination::IterationLimit => "iteration-limit",
                        },
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let body = ProbeReport {
                lambda: lambda_json(&lambda),
                m,
                k,
                j,
                scheme: scheme_name(s),
                tol,
                max_iter,
                minimal_residual: n_curve.last().map_or(f64::NAN, |p| p.minimal_residual),
                n_curve,
            };
            Ok(Report::new("volterra-probe", &body, Some("nCurve")))
        }
        VolterraCommand::Evidence { lambda, n_list } => {
            let ev = volterra_membership_evidence(&lambda, &n_list)?;
            let body = EvidenceReport {
                lambda: lambda_json(&lambda),
                convergence_order: ev.convergence_order,
                residuals: ev.residuals.iter().map(|&(n, residual)| ResidualPoint { n, residual }).collect(),
            };
            Ok(Report::new("volterra-evidence", &body, Some("residuals")))
        }
        VolterraCommand::Shifted { gamma, n } => {
            let s = shifted_volterra_sigma(&gamma, n)?;
            let body = ShiftedReport { gamma: lambda_json(&gamma), n, sigma: sigma_json(&s) };
            Ok(Report::new("volterra-shifted", &body, Some("values")))
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepPoint {
    modulus: f64,
    phase: f64,
    re: f64,
    im: f64,
    status: &'static str,
    witness_k: Option<u64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepReport {
    operator: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max: Option<u64>,
    points: Vec<SweepPoint>,
}

fn sweep(a: SweepArgs) -> Result<Report, Failure> {
    let points = a.grid.points();
    let point = |m: &BigRational, phase: f64, status: &'static str, witness_k: Option<u64>| {
        let z = Lambda::polar(m.clone(), phase).to_complex();
        SweepPoint { modulus: m.to_f64().unwrap_or(f64::NAN), phase, re: z.re, im: z.im, status, witness_k }
    };
    let body = match (&a.weights, &a.input) {
        (Some(f), _) => {
            let rows = points
                .par_iter()
                .map(|(m, phase)| {
                    let v = decide(f, &Lambda::polar(m.clone(), *phase), a.kmax, a.mode, a.horizon)?;
                    Ok(point(m, *phase, status_name(v.status), v.witness_k))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            SweepReport {
                operator: json!({ "family": render_family(f) }),
                mode: Some(mode_name(if a.mode == ModeArg::Analytic { Mode::Analytic } else { Mode::Sampled })),
                k_max: Some(a.kmax),
                points: rows,
            }
        }
        (None, Some(path)) => {
            let t = read_matrix(path, false)?;
            let s = matrix_sigma(&t, a.tol)?;
            let rows = points
                .par_iter()
                .map(|(m, phase)| {
                    let inside = s.contains(Lambda::polar(m.clone(), *phase).to_complex());
                    point(m, *phase, if inside { "In" } else { "Out" }, None)
                })
                .collect();
            SweepReport { operator: json!({ "matrix": matrix_json(&t) }), mode: None, k_max: None, points: rows }
        }
        (None, None) => unreachable!("clap requires --weights or --input"),
    };
    Ok(Report::new("sweep", &body, Some("points")))
}
