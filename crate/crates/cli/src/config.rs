use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use logmaj::ineq::{Characterization, Direction, TestFunction};
use logmaj::major::{MajorizationMode, NormSpec};

#[derive(Debug, Parser)]
#[command(name = "logmaj", version, about = "Verify log-majorization relations and multivariate norm inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one check on a matrix file or on a seeded random family.
    Check(CheckArgs),
    /// Compare two vectors (or the spectra of the first matrix of two matrix files).
    Majorize(MajorizeArgs),
    /// Run a check over many seeded random families and summarize the margins.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// Multivariate norm inequality against the β_θ average.
    Alt,
    /// Log-majorization of the singular value vectors with determinant equality.
    Logmaj,
    /// Function-of-norm inequality for a test function.
    Corollary,
    /// Trace of the q-th power.
    TracePower,
    /// θ → 0 limit with the matrix exponential of the summed logarithms.
    Gt,
    /// Convergence of |∏ A^θ|^{1/θ} to exp(Σ log A).
    LieTrotter,
    /// Three-line bound with both boundary integrals.
    Hirschman,
    /// Power-norm characterization of (weak) log-majorization for a pair.
    Char,
    /// Equivalence between a spectral relation and its norm inequalities.
    Equiv,
    /// Small-p limit of (1/p) log((1/d) tr B^{-p}).
    Plimit,
}

impl CheckKind {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Debug, Args)]
pub struct CheckParams {
    /// θ in [0, 1]; a comma list is a grid (lie-trotter, scan).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    /// Exponent for trace-power.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    /// Norm: op, trace, kyfan:k, schatten:p.
    #[arg(long, default_value = "op")]
    pub norm: NormSpec,
    /// Test function: pow:p, shiftpow:alpha:p, log1p:p:eps, hinge:alpha, exp.
    #[arg(long = "fn", default_value = "pow:1")]
    pub function: TestFunction,
    /// Target accuracy of the β_θ quadrature.
    #[arg(long, default_value_t = 1e-8)]
    pub quad_tol: f64,
    /// Predicate for char: weaklog or log.
    #[arg(long, default_value = "weaklog")]
    pub mode: MajorizationMode,
    /// Relation for equiv: weak, strong, weaklog, log, log-linear.
    #[arg(long, default_value = "log")]
    pub relation: Characterization,
    /// Direction for equiv: forward or converse.
    #[arg(long, default_value = "forward")]
    pub direction: Direction,
    /// Decreasing exponents for plimit.
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
    pub p_seq: Vec<f64>,
    /// Allowed distance to the limit for plimit.
    #[arg(long, default_value_t = 1e-3)]
    pub limit_tol: f64,
}

#[derive(Clone, Debug, Args)]
pub struct RandomSource {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Matrix dimension of random families.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Number of matrices in random families (atoms for equiv).
    #[arg(long, default_value_t = 2)]
    pub family: usize,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include per-node integrand values.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Clone, Debug, Args)]
pub struct CheckArgs {
    pub check: CheckKind,
    /// Matrix file; a seeded random family is used when absent.
    pub matrices: Option<PathBuf>,
    #[command(flatten)]
    pub params: CheckParams,
    #[command(flatten)]
    pub source: RandomSource,
    /// Seed offset of the random family, for replaying one scan sample.
    #[arg(long, default_value_t = 0)]
    pub offset: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct MajorizeArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value = "weak")]
    pub mode: MajorizationMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct ScanArgs {
    pub check: CheckKind,
    #[command(flatten)]
    pub params: CheckParams,
    #[command(flatten)]
    pub source: RandomSource,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
