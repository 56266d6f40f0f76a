use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod check;
mod commands;
mod table;
mod validate;

use table::Format;

/// Exact and approximate statistics of random multicurves and weighted
/// permutations.
#[derive(Parser)]
#[command(name = "multicurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Output {
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Clone, Debug)]
pub struct Weights {
    /// Zeta truncation `m` (a positive integer or `inf`).
    #[arg(long, default_value = "inf")]
    pub m: String,
    /// Weight scale, a rational such as `1/2` or `0.5`.
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    /// Explicit weights `theta_1,theta_2,...`; overrides `--m`/`--alpha`.
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Masur-Veech volume of Q_{g,n} with the per-graph breakdown (JSON).
    Volumes {
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Maximum number of stable graphs to enumerate.
        #[arg(long, default_value_t = multicurve::graphs::DEFAULT_GRAPH_BUDGET)]
        budget: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List stable graphs of type (g, n).
    Graphs {
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = multicurve::graphs::DEFAULT_GRAPH_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Law of the number of components of a random multicurve, next to the
    /// permutation model and its approximations.
    Distribution {
        #[arg(long)]
        g: u32,
        /// `exact` sums over all stable graphs; `float` keeps only
        /// single-vertex graphs and works at large genus.
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Skip the multicurve column.
        #[arg(long)]
        approx_only: bool,
        #[arg(long, default_value_t = multicurve::graphs::DEFAULT_GRAPH_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Cycle-count law of weighted permutations with cumulant and
    /// mod-Poisson diagnostics.
    Perm {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        weights: Weights,
        /// Defaults to exact up to n = 300.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Truncation of the float computation.
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Empirical cycle counts from the exact sampler against the exact law.
    Sample {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        weights: Weights,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Poisson-Gamma coefficients, local limit and tail estimates.
    Approx {
        /// Number of points; use `--g` for n = 3g - 3.
        #[arg(long, conflicts_with = "g", required_unless_present = "g")]
        n: Option<usize>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long, default_value = "inf")]
        m: String,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long)]
        k_max: Option<usize>,
        /// Tail thresholds as multiples of lambda.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 2.0])]
        x: Vec<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the built-in invariant suites.
    Check,
    /// Re-read an emitted file and verify its normalization and grades.
    Validate { path: PathBuf },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Volumes { g, n, budget, output } => commands::volumes(g, n, budget, output),
        Command::Graphs { g, n, budget, out } => commands::graphs(g, n, budget, &out),
        Command::Distribution {
            g,
            mode,
            approx_only,
            budget,
            out,
        } => commands::distribution(g, mode, approx_only, budget, &out),
        Command::Perm {
            n,
            weights,
            mode,
            k_max,
            out,
        } => commands::perm(n, &weights, mode, k_max, &out),
        Command::Sample {
            n,
            weights,
            samples,
            seed,
            out,
        } => commands::sample(n, &weights, samples, seed, &out),
        Command::Approx {
            n,
            g,
            m,
            alpha,
            k_max,
            x,
            out,
        } => commands::approx(n, g, &m, &alpha, k_max, &x, &out),
        Command::Check => check::run(),
        Command::Validate { path } => validate::run(&path),
    }
}

/// 2 for bad input, 3 for exhausted budgets, 4 for violated invariants.
fn exit_code(err: &anyhow::Error) -> u8 {
    use multicurve::Error;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::InvalidParameter(_) | Error::Unstable { .. } | Error::Io(_) => 2,
                Error::Budget(_) => 3,
                Error::DimensionMismatch { .. } | Error::GradeMismatch(..) | Error::Invariant(_) => 4,
            };
        }
        if cause.downcast_ref::<validate::Failed>().is_some() || cause.downcast_ref::<check::Failed>().is_some() {
            return 4;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
