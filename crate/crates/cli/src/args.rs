use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ridgefp::{GeneratorSpec, Method, ThetaChoice};

#[derive(Debug, Parser)]
#[command(name = "ridgefp", version, about = "Primal-dual fixed-point solvers for ridge regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one method and print a JSON report.
    Solve(SolveArgs),
    /// Write closed-form eigenvalues of the iteration matrices as CSV.
    Spectrum(SpectrumArgs),
    /// Tabulate theoretical rate and observed convergence over a grid of relaxations.
    SweepTheta(SweepArgs),
    /// Run several methods and print a JSON array of reports.
    Bench(BenchArgs),
    /// Write a seeded random problem file.
    Gen(GenArgs),
}

/// A problem file or a generator recipe such as `d=10,n=500,seed=1`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProblemSource {
    /// Problem file: header `# d n m lambda`, then the rows of A, then y.
    pub problem: Option<PathBuf>,
    /// Generate the problem instead: `d=..,n=..[,m=..][,lambda=..][,seed=..][,dist=normal|uniform]`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<GeneratorSpec>,
}

/// Options shared by every subcommand that runs a solver.
#[derive(Debug, Args)]
pub struct RunOptions {
    /// Stopping tolerance on the duality gap.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Compute the largest singular value by SVD instead of power iteration.
    #[arg(long)]
    pub exact_sigma: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: ProblemSource,
    #[arg(long, default_value = "qtz")]
    pub method: Method,
    /// Relaxation: a number, `optimal`, or `pure` (θ = 1).
    #[arg(long, default_value = "optimal")]
    pub theta: ThetaArg,
    #[command(flatten)]
    pub run: RunOptions,
    /// Write the per-iteration convergence trace to this CSV file.
    #[arg(long, value_name = "CSV")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: ProblemSource,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: ProblemSource,
    #[arg(long, default_value = "qtz")]
    pub method: Method,
    /// Number of grid points spanning (0, 1.1 × admissible upper bound].
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[command(flatten)]
    pub run: RunOptions,
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub source: ProblemSource,
    /// Comma-separated methods; defaults to all of them.
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub run: RunOptions,
    /// Also write the JSON array to this file.
    #[arg(long, value_name = "JSON")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Defaults to 1/n.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DistArg::Normal)]
    pub dist: DistArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Normal,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArg(pub ThetaChoice);

impl FromStr for ThetaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "optimal" => Ok(Self(ThetaChoice::Optimal)),
            "pure" => Ok(Self(ThetaChoice::Pure)),
            other => match other.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(Self(ThetaChoice::Explicit(v))),
                _ => Err(format!("expected a positive number, `optimal` or `pure`, got `{s}`")),
            },
        }
    }
}
