use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use reach_core::cegar::{cegar_solve, EngineConfig, Optimizations, Outcome, Statistics, Verdict};
use reach_core::diagnostics::DiagnosticsReport;
use reach_core::ilp::SolveBudget;
use reach_core::net::{
    parse_net, parse_problem, Mode, NetError, ParseError, ProblemError, ReachabilityProblem,
    TransitionId,
};
use reach_core::oracle::{bfs_reach, OracleBudget, OracleOutcome};

use crate::args::{CheckArgs, Cli, Command, Format, OracleArgs, ProblemArgs, SolveArgs};

pub const EXIT_REACHABLE: u8 = 0;
pub const EXIT_UNREACHABLE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Net { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Lookup(#[from] NetError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Output(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Structured output of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub witness: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub stats: Statistics,
    pub diagnostics: Option<DiagnosticsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleStats {
    pub explored: usize,
}

/// Structured output of `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub witness: Vec<String>,
    pub stats: OracleStats,
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Oracle(args) => oracle(args, out),
        Command::CheckWitness(args) => check_witness(args, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn split_pair(text: &str) -> Result<(&str, u64), CliError> {
    let (name, count) = text
        .rsplit_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected NAME:COUNT, got `{text}`")))?;
    let count = count
        .trim()
        .parse::<u64>()
        .map_err(|_| CliError::Usage(format!("bad count in `{text}`")))?;
    Ok((name.trim(), count))
}

fn load_problem(args: &ProblemArgs) -> Result<ReachabilityProblem, CliError> {
    let net = parse_net(&read(&args.net)?).map_err(|source| CliError::Net {
        path: args.net.clone(),
        source,
    })?;
    if let Some(path) = &args.problem {
        return Ok(parse_problem(&read(path)?, net)?);
    }
    if args.finals.is_empty() {
        return Err(CliError::Usage(
            "no target: give --problem FILE or at least one --final PLACE:COUNT".into(),
        ));
    }
    let finals = args.finals.iter().map(|s| split_pair(s)).collect::<Result<Vec<_>, _>>()?;
    let required = args.require.iter().map(|s| split_pair(s)).collect::<Result<Vec<_>, _>>()?;
    let mode = if args.cover { Mode::Cover } else { Mode::Reach };
    Ok(ReachabilityProblem::from_parts(net, None, &finals, mode, &required)?)
}

fn names(problem: &ReachabilityProblem, seq: &[TransitionId]) -> Vec<String> {
    problem.net.sequence_names(seq)
}

fn stats_text(stats: &Statistics) -> String {
    let mut s = format!(
        "ilp calls: {}\nilp nodes: {}\nilp pivots: {}\ncegar steps: {}\nincrement refinements: {}\n\
         jump children: {}\npartial solutions: {}\nmemo hits: {}\nsearch nodes: {}\npruned leaves: {}\n\
         branching factor: avg {:.2} max {}\n",
        stats.ilp_calls,
        stats.ilp_nodes,
        stats.ilp_pivots,
        stats.cegar_steps,
        stats.increment_refinements,
        stats.jump_children,
        stats.partial_solutions,
        stats.memo_hits,
        stats.search_nodes,
        stats.pruned_leaves,
        stats.branching_avg,
        stats.branching_max,
    );
    if let Some(ms) = stats.elapsed_ms {
        s.push_str(&format!("elapsed: {ms} ms\n"));
    }
    s
}

fn exit_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Reachable => EXIT_REACHABLE,
        Verdict::Unreachable => EXIT_UNREACHABLE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn solve(args: SolveArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let problem = load_problem(&args.problem)?;
    let defaults = EngineConfig::default();
    let workers = usize::try_from(args.workers).unwrap_or(usize::MAX);
    let config = EngineConfig {
        solve_budget: SolveBudget {
            max_nodes: args.ilp_nodes.unwrap_or(defaults.solve_budget.max_nodes),
            ..defaults.solve_budget
        },
        search_nodes: args.search_nodes.unwrap_or(defaults.search_nodes),
        max_steps: args.max_steps.unwrap_or(defaults.max_steps),
        workers,
        optimizations: Optimizations {
            stubborn: !args.no_stubborn,
            subtree_cut: !args.no_subtree_cut,
            prune: !args.no_prune,
            memo: !args.no_memo,
        },
        deterministic: workers == 1,
        ..defaults
    };
    let run = cegar_solve(&problem, &config);
    let verdict = run.outcome.verdict();

    if let (Some(path), Some(report)) = (&args.graph, run.outcome.diagnostics()) {
        fs::write(path, report.to_graph(&problem.net)).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }

    match args.output.format {
        Format::Structured => {
            let (witness, reason, diagnostics) = match run.outcome {
                Outcome::Witness(seq) => (names(&problem, &seq), None, None),
                Outcome::Unreachable(d) => (Vec::new(), None, Some(d)),
                Outcome::Inconclusive {
                    reason,
                    diagnostics,
                } => (Vec::new(), Some(reason), Some(diagnostics)),
            };
            let report = SolveReport {
                verdict,
                witness,
                reason,
                stats: run.stats,
                diagnostics,
                seed: args.seed,
            };
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Format::Text => {
            match &run.outcome {
                Outcome::Witness(seq) => {
                    for name in names(&problem, seq) {
                        writeln!(out, "{name}")?;
                    }
                }
                Outcome::Unreachable(d) => {
                    writeln!(out, "unreachable")?;
                    write!(out, "{}", d.render_text())?;
                }
                Outcome::Inconclusive {
                    reason,
                    diagnostics,
                } => {
                    writeln!(out, "inconclusive: {reason}")?;
                    write!(out, "{}", stats_text(&run.stats))?;
                    write!(out, "{}", diagnostics.render_text())?;
                }
            }
            if args.output.stats && verdict != Verdict::Inconclusive {
                eprint!("{}", stats_text(&run.stats));
            }
        }
    }
    Ok(exit_code(verdict))
}

fn oracle(args: OracleArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let problem = load_problem(&args.problem)?;
    let budget = OracleBudget {
        max_states: usize::try_from(args.max_states).unwrap_or(usize::MAX),
        ..OracleBudget::default()
    };
    let outcome = bfs_reach(&problem, &budget);
    let (verdict, witness, explored) = match &outcome {
        OracleOutcome::Witness(seq) => (Verdict::Reachable, names(&problem, seq), None),
        OracleOutcome::Unreachable => (Verdict::Unreachable, Vec::new(), None),
        OracleOutcome::Inconclusive { explored } => (Verdict::Inconclusive, Vec::new(), Some(*explored)),
    };
    match args.output.format {
        Format::Structured => {
            let report = OracleReport {
                verdict,
                witness,
                stats: OracleStats {
                    explored: explored.unwrap_or(0),
                },
            };
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Format::Text => match verdict {
            Verdict::Reachable => {
                for name in witness {
                    writeln!(out, "{name}")?;
                }
            }
            Verdict::Unreachable => writeln!(out, "unreachable")?,
            Verdict::Inconclusive => writeln!(
                out,
                "inconclusive: state budget exhausted after {} states",
                explored.unwrap_or(0)
            )?,
        },
    }
    Ok(exit_code(verdict))
}

fn check_witness(args: CheckArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let problem = load_problem(&args.problem)?;
    let text = read(&args.witness)?;
    let sequence = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|name| problem.net.resolve_transition(name))
        .collect::<Result<Vec<_>, _>>()?;
    match problem.check_witness(&sequence) {
        Ok(()) => {
            writeln!(out, "ok")?;
            Ok(EXIT_REACHABLE)
        }
        Err(e) => {
            writeln!(out, "{e}")?;
            Ok(EXIT_UNREACHABLE)
        }
    }
}
