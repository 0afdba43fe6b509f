use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::SolverKind;
use crate::format::ReductionKindDoc;

#[derive(Debug, Parser)]
#[command(name = "sparsehard", version, about = "Label Cover reductions to sparse approximation, and the solvers to probe them")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of supports (or assignments) an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub cap_supports: u64,
    /// Largest vector dimension a construction may produce.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub cap_dim: u64,
    /// Write the produced document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Aligned text for people.
    Table,
    /// One JSON object per line.
    Record,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Label Cover instance, optionally reducing it right away.
    Generate(GenerateArgs),
    /// Reduce a Label Cover file to a sparse approximation instance.
    Reduce(ReduceArgs),
    /// Run solvers on an instance and report the residual gap.
    Solve(SolveArgs),
    /// Run property checks on a construction, an instance file or a report.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Run a fixed suite of desk-scale gap experiments.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    PlantedProjection,
    PlantedUnique,
    RandomUnique,
    AntiSatisfiable,
    Formula,
    RandomFormula,
}

#[derive(Debug, Args)]
pub struct ReductionArgs {
    #[arg(long, value_enum)]
    pub reduction: Option<ReductionKindDoc>,
    /// Number of layers for the layered reductions.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Smoothness parameter believed to hold, recorded in the output.
    #[arg(long)]
    pub t_declared: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub num_v: usize,
    #[arg(long, default_value_t = 4)]
    pub num_w: usize,
    #[arg(long, default_value_t = 4)]
    pub sigma_v: usize,
    #[arg(long, default_value_t = 2)]
    pub sigma_w: usize,
    /// Alphabet size `R` of unique instances.
    #[arg(long, default_value_t = 3)]
    pub labels: usize,
    /// Left degree of the constraint graph.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Vertices per side of the anti-satisfiable cycle.
    #[arg(long, default_value_t = 2)]
    pub cycle: usize,
    /// Clauses as signed 1-based literals, e.g. "1,-2,3;2,3,-4".
    #[arg(long)]
    pub clauses: Option<String>,
    /// Variables of a random five-occurrence formula (a multiple of 3).
    #[arg(long, default_value_t = 3)]
    pub vars: usize,
    /// Parallel repetition count `u` for formula families.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[command(flatten)]
    pub reduction: ReductionArgs,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub reduction: ReductionArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// A sparse instance, or a Label Cover instance together with --reduction.
    pub input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "omp,ols,oracle")]
    pub solvers: Vec<SolverKind>,
    /// Overrides the instance sparsity k.
    #[arg(long)]
    pub sparsity: Option<usize>,
    /// Disable coverage-based pruning in the exhaustive oracle.
    #[arg(long)]
    pub no_prune: bool,
    #[command(flatten)]
    pub reduction: ReductionArgs,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Incoherent vector system V(ℓ, d).
    System {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        d: usize,
    },
    /// Hadamard code set of order 2^m.
    Hadamard {
        #[arg(long)]
        m: u32,
    },
    /// A Label Cover or sparse instance file.
    Instance { path: PathBuf },
    /// A gap report, recomputed from its embedded configuration.
    Report { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Seeds per experiment, starting at --seed.
    #[arg(long, default_value_t = 3)]
    pub trials: u64,
}
