//! `monobasis`: command-line driver.
//!
//! Exit codes: 0 on success, 1 when a checked property fails, 2 on usage or
//! input errors.

mod commands;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "monobasis",
    version,
    about = "Square-ordered monomial bases: enumeration, norms and basis constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the degree-n monomials of length <= d in square order.
    Enumerate {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Square-order rank of a multi-index given as `[[pos,exp],...]`.
    Rank {
        #[arg(long)]
        index: String,
    },
    /// The multi-index of a given degree and rank.
    Unrank {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        rank: u64,
    },
    /// Compatible orderings of doubly indexed families.
    Ordering {
        #[command(subcommand)]
        action: OrderingAction,
    },
    /// Bracket or oracle value of a polynomial's sup-norm on a polydisc.
    Norm {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        radii: RadiiArg,
        #[arg(long, value_enum, default_value_t = NormMode::Bracket)]
        mode: NormMode,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monotonicity of the length decomposition and the boundary identity
    /// for each of its blocks.
    Fdd {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        radii: RadiiArg,
        /// Prefix block count.
        #[arg(long)]
        s: usize,
        /// Full block count.
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = NormMode::Oracle)]
        mode: NormMode,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded lower bounds for the basis constant of the degree-n monomials.
    BasisConstant {
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        degree: Vec<u32>,
        #[arg(long)]
        dim: usize,
        /// Radii as a JSON array or file; defaults to the unit polydisc.
        #[arg(long)]
        radii: Option<String>,
        /// Witness evaluations per degree.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, env = "MONOBASIS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
        /// Write an SVG chart of the estimates against 3^n.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Replays the inductive 1 + 2·3^n estimate on one coefficient vector.
    ReplayChain {
        /// Coefficients as a JSON array of numbers or `[re, im]` pairs, or a file.
        #[arg(long)]
        poly_coeffs: String,
        /// Degree n + 1 of the monomials.
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, env = "MONOBASIS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = monobasis::norms::DEFAULT_REL_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ported seminorm of a truncated Taylor series.
    Seminorm {
        #[arg(long)]
        series: String,
        #[command(flatten)]
        family: SeminormArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seminorms of the tails left after ordered partial sums.
    Converge {
        #[arg(long)]
        series: String,
        /// Comma-separated cuts; defaults to the row-completion cuts.
        #[arg(long, value_delimiter = ',')]
        cuts: Option<Vec<usize>>,
        #[command(flatten)]
        family: SeminormArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs the seeded property suite.
    VerifyAll {
        #[arg(long, env = "MONOBASIS_SEED", default_value_t = 0)]
        seed: u64,
        /// Smaller trial counts.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
enum OrderingAction {
    /// Prefix decompositions of an ordering up to a position.
    Verify {
        /// Ordering table file `[[n,m],...]`; the diagonal ordering if absent.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        upto: usize,
        /// Also compare prefixes `j` and `j + L` for every `j`.
        #[arg(long)]
        growth: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct RadiiArg {
    /// Radii as a JSON array such as "[1,1,0.5]", or a file holding one.
    #[arg(long)]
    radii: String,
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    #[arg(long, env = "MONOBASIS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    iterations: usize,
    /// Oracle grid points per coordinate.
    #[arg(long, default_value_t = monobasis::norms::DEFAULT_GRID_POINTS)]
    grid: usize,
}

#[derive(Args, Debug)]
#[command(group = ArgGroup::new("family").required(true).args(["beta", "preset", "radius"]))]
struct SeminormArgs {
    /// `β_j` as a JSON array or file; with `--alpha`, selects the Taylor family.
    #[arg(long, requires = "alpha")]
    beta: Option<String>,
    /// `α_n` as a JSON array or file.
    #[arg(long, requires = "beta")]
    alpha: Option<String>,
    /// Taylor family with `β_j = 1/j` and `α_n = 1/(n+1)`.
    #[arg(long)]
    preset: bool,
    /// Bounded-set seminorm of this radius instead of the Taylor family.
    #[arg(long)]
    radius: Option<f64>,
    /// Per-degree weights `w_n` as a JSON array or file.
    #[arg(long)]
    weights: Option<String>,
    /// Number of coordinates; defaults to the longest index in the series.
    #[arg(long)]
    dim: Option<usize>,
    /// Grid oracle sups instead of coefficient sums.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format.
    #[arg(long = "out", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Destination file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum NormMode {
    Bracket,
    Oracle,
}

/// Whether the checked properties held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
