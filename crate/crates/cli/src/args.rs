use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use xeig_core::{Lambda, WeightFamily};

use crate::parse::{family, grid, lambda, Grid};

#[derive(Debug, Parser)]
#[command(
    name = "xeig",
    version,
    about = "Extended eigenvalues XT = λTX for weighted shifts, finite matrices and the Volterra operator"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for grids and curves (overrides XEIG_PARALLELISM).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub parallelism: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bilateral weighted shifts T e_n = w_n e_{n-1}.
    #[command(subcommand)]
    Shift(ShiftCommand),
    /// Finite matrices read from a JSON file.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Discretized Volterra operator.
    #[command(subcommand)]
    Volterra(VolterraCommand),
    /// Membership over a grid of λ in polar coordinates.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Rectangle,
    Trapezoid,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Weight family, e.g. `powerlaw:alpha=1` or `exptail:pos=1/2,neg=1/2`.
    #[arg(long, value_parser = family)]
    pub weights: WeightFamily,
}

#[derive(Debug, Subcommand)]
pub enum ShiftCommand {
    /// Decide whether λ is an extended eigenvalue.
    Member {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        #[arg(long, default_value_t = 20)]
        kmax: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
        mode: ModeArg,
        /// Sampling horizon N for `--mode sampled`.
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
    },
    /// Radii c_k, d_k, their limits and the boundary shape.
    Annulus {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        kmax: u64,
    },
    /// Operator norms of T^k for k = 1..kmax.
    Norms {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        kmax: u64,
        /// Report norms as exact rationals.
        #[arg(long)]
        exact: bool,
        /// Search window [-W, W]; defaults to the smallest certifying window per k.
        #[arg(long)]
        window: Option<u64>,
    },
    /// Roots ‖T^k‖^{1/k} and the quasinilpotence verdict.
    Quasinilpotence {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(2..))]
        kmax: u64,
        #[arg(long, default_value_t = xeig_core::shift::DEFAULT_QN_THRESHOLD)]
        threshold: f64,
    },
    /// Truncated eigenoperator X e_n = λ^{-n} β(n-k+1, n) e_{n-k} and its check.
    Witness {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, value_parser = lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        /// Index shift; defaults to the least k from the analytic decision.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 20)]
        kmax: u64,
        #[arg(long, default_value_t = 8)]
        window: u64,
    },
}

#[derive(Debug, Args)]
pub struct MatrixInput {
    /// JSON file `{"dim": n, "entries": [[re, im], ...]}` (row-major), or `-` for stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Use double precision even though the input is parsed exactly.
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// The set of extended eigenvalues.
    Sigma {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value_t = xeig_core::matrix::DEFAULT_TOL)]
        tol: f64,
    },
    /// Membership of one λ through the null space of X -> XT - λTX.
    Member {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_parser = lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        #[arg(long, default_value_t = xeig_core::matrix::DEFAULT_TOL)]
        tol: f64,
    },
    /// Random conjugates G T G^-1, or the sampled distance to a target.
    Orbit {
        #[command(flatten)]
        input: MatrixInput,
        /// Target matrix B; reports the best ‖G A G^-1 - B‖ found.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 100.0)]
        cond_max: f64,
        #[arg(long, required = true)]
        seed: Option<u64>,
        #[arg(long, default_value_t = xeig_core::matrix::DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VolterraCommand {
    /// The N x N matrix of the discretization.
    Discretize {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Rectangle)]
        scheme: SchemeArg,
    },
    /// Minimal ‖XV - λVX‖ over ‖X‖ <= j with <X x_m, y_k> = 1.
    #[command(group(ArgGroup::new("sizes").required(true).args(["n", "n_list"])))]
    Probe {
        #[arg(long, value_parser = lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = SchemeArg::Rectangle)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 10.0)]
        j: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Residuals of composition witnesses and their convergence order.
    Evidence {
        #[arg(long, value_parser = lambda)]
        lambda: Lambda,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        n_list: Vec<usize>,
    },
    /// Extended eigenvalues of γI + V_N.
    Shifted {
        #[arg(long, value_parser = lambda, allow_hyphen_values = true)]
        gamma: Lambda,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("operator").required(true).args(["weights", "input"])))]
pub struct SweepArgs {
    /// Sweep a weighted shift.
    #[arg(long, value_parser = family)]
    pub weights: Option<WeightFamily>,
    /// Sweep a matrix read from JSON.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `modulus:a..b:steps[:log],phase:a..b:steps`, or value lists `modulus:0.5|1|2`.
    #[arg(long, value_parser = grid)]
    pub grid: Grid,
    #[arg(long, default_value_t = 20)]
    pub kmax: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,
    #[arg(long, default_value_t = xeig_core::matrix::DEFAULT_TOL)]
    pub tol: f64,
}
