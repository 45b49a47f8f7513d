use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "reach", version, about = "Petri net reachability by state-equation refinement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide reachability with the refinement engine.
    Solve(SolveArgs),
    /// Decide reachability by explicit breadth-first search.
    Oracle(OracleArgs),
    /// Replay a witness file against a problem.
    CheckWitness(CheckArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Net file.
    pub net: PathBuf,
    /// TOML problem file; replaces --final, --cover and --require.
    #[arg(long, conflicts_with_all = ["finals", "cover", "require"])]
    pub problem: Option<PathBuf>,
    /// Final marking entry, repeatable. Unlisted places are 0.
    #[arg(long = "final", value_name = "PLACE:COUNT")]
    pub finals: Vec<String>,
    /// Accept any marking covering the final one.
    #[arg(long)]
    pub cover: bool,
    /// Side constraint: the transition fires at least COUNT times.
    #[arg(long, value_name = "TRANSITION:COUNT")]
    pub require: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print statistics (text mode prints them on standard error).
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// LP relaxations allowed per integer solve.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub ilp_nodes: Option<u64>,
    /// Nodes allowed per realization search.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub search_nodes: Option<u64>,
    /// Partial solutions processed before giving up.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_steps: Option<u64>,
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long)]
    pub no_stubborn: bool,
    #[arg(long)]
    pub no_subtree_cut: bool,
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long)]
    pub no_memo: bool,
    /// Echoed in structured output; solving is deterministic.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Write the diagnostics graph (node/edge list) to this file.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Distinct states the search may store.
    #[arg(long, value_name = "N", default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// One transition name per line.
    pub witness: PathBuf,
}
