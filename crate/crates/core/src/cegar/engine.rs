use std::collections::{BTreeMap, HashSet};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    add_family, build_dependency_graph, estimate_tokens, make_increment_constraint,
    spawn_jump_children, transform_jumps, Constraint, ConstraintFamily, JumpFamily,
    PartialSolution, SccTriple,
};
use crate::diagnostics::{
    build_report, record_failure, Collector, DiagnosticsReport, FailedConstraintRecord,
    FailureReason,
};
use crate::ilp::{
    build_state_equation, omega_compare, solve_omega_min_with_stats, LinearSystem, SolveBudget,
    SolveOutcome,
};
use crate::net::{ReachabilityProblem, TransitionId, TransitionVector};
use crate::realize::{realize, Realization, SearchOptions, DEFAULT_SEARCH_NODES};

/// Switches for the search reductions; all on by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Optimizations {
    pub stubborn: bool,
    pub subtree_cut: bool,
    pub prune: bool,
    pub memo: bool,
}

impl Default for Optimizations {
    fn default() -> Self {
        Optimizations {
            stubborn: true,
            subtree_cut: true,
            prune: true,
            memo: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub solve_budget: SolveBudget,
    pub search_nodes: u64,
    pub max_queue: usize,
    pub max_steps: u64,
    pub workers: usize,
    pub optimizations: Optimizations,
    /// Leave timings out of the statistics so output is reproducible.
    pub deterministic: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            solve_budget: SolveBudget::default(),
            search_nodes: DEFAULT_SEARCH_NODES,
            max_queue: 100_000,
            max_steps: 10_000,
            workers: 1,
            optimizations: Optimizations::default(),
            deterministic: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub ilp_calls: u64,
    pub ilp_nodes: u64,
    pub ilp_pivots: u64,
    pub cegar_steps: u64,
    pub increment_refinements: u64,
    pub jump_children: u64,
    pub partial_solutions: u64,
    pub memo_hits: u64,
    pub search_nodes: u64,
    pub pruned_leaves: u64,
    pub branching_avg: f64,
    pub branching_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Reachable,
    Unreachable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Witness(Vec<TransitionId>),
    Unreachable(DiagnosticsReport),
    Inconclusive {
        reason: String,
        diagnostics: DiagnosticsReport,
    },
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Witness(_) => Verdict::Reachable,
            Outcome::Unreachable(_) => Verdict::Unreachable,
            Outcome::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }

    pub fn witness(&self) -> Option<&[TransitionId]> {
        match self {
            Outcome::Witness(seq) => Some(seq),
            _ => None,
        }
    }

    pub fn diagnostics(&self) -> Option<&DiagnosticsReport> {
        match self {
            Outcome::Witness(_) => None,
            Outcome::Unreachable(d) | Outcome::Inconclusive { diagnostics: d, .. } => Some(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub outcome: Outcome,
    pub stats: Statistics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Seed,
    Leaf,
    Jump,
}

struct Job {
    solution: PartialSolution,
    origin: Origin,
}

enum Item {
    Job(Job),
    Family { family: JumpFamily, owner: usize },
}

enum Stop {
    Witness(Vec<TransitionId>),
    Limit(String),
}

type LeafKey = (ConstraintFamily, TransitionVector, Vec<TransitionId>);

#[derive(Default)]
struct Shared {
    queue: BTreeMap<(u128, u64), Item>,
    next_seq: u64,
    memo: HashSet<ConstraintFamily>,
    leaves_seen: HashSet<LeafKey>,
    collector: Collector,
    stats: Statistics,
    branching: Vec<u64>,
    in_flight: usize,
    stop: Option<Stop>,
    poisoned: Option<String>,
}

impl Shared {
    fn push(&mut self, size: u128, item: Item, max_queue: usize) {
        self.queue.insert((size, self.next_seq), item);
        self.next_seq += 1;
        if self.queue.len() > max_queue && self.stop.is_none() {
            self.stop = Some(Stop::Limit("queue limit reached".into()));
        }
    }

    fn poison(&mut self, reason: &str) {
        self.poisoned.get_or_insert_with(|| reason.to_string());
    }

    fn fail<'t>(
        &mut self,
        triples: impl IntoIterator<Item = (&'t SccTriple, u64)>,
        job: &PartialSolution,
        reason: FailureReason,
    ) {
        for (triple, tokens) in triples {
            record_failure(
                &mut self.collector,
                FailedConstraintRecord {
                    triple: triple.clone(),
                    tokens,
                    prefix: job.sequence.clone(),
                    remainder: job.remainder.support().collect(),
                    reason,
                    count: 1,
                },
            );
        }
    }
}

struct Context<'a> {
    problem: &'a ReachabilityProblem,
    config: &'a EngineConfig,
    base: LinearSystem,
    search: SearchOptions,
    state: Mutex<Shared>,
    wake: Condvar,
}

impl Context<'_> {
    fn lock(&self) -> std::sync::MutexGuard<'_, Shared> {
        self.state.lock().expect("engine state lock")
    }

    /// Takes the next job, or `None` when the run is over.
    fn next_job(&self) -> Option<Job> {
        let mut g = self.lock();
        loop {
            if g.stop.is_some() {
                return None;
            }
            if g.stats.cegar_steps >= self.config.max_steps && !g.queue.is_empty() {
                g.stop = Some(Stop::Limit("step limit reached".into()));
                self.wake.notify_all();
                return None;
            }
            if let Some(((size, _), item)) = g.queue.pop_first() {
                let job = match item {
                    Item::Job(job) => job,
                    Item::Family { mut family, owner } => {
                        let Some(constraints) = spawn_jump_children(&mut family) else {
                            continue;
                        };
                        g.stats.jump_children += 1;
                        g.branching[owner] += 1;
                        let job = Job {
                            solution: PartialSolution {
                                constraints,
                                x: family.x.clone(),
                                sequence: family.sequence.clone(),
                                remainder: family.remainder.clone(),
                            },
                            origin: Origin::Jump,
                        };
                        if !family.is_exhausted() {
                            let max_queue = self.config.max_queue;
                            g.push(size, Item::Family { family, owner }, max_queue);
                        }
                        job
                    }
                };
                g.stats.cegar_steps += 1;
                g.in_flight += 1;
                return Some(job);
            }
            if g.in_flight == 0 {
                self.wake.notify_all();
                return None;
            }
            g = self.wake.wait(g).expect("engine state lock");
        }
    }

    fn finish_job(&self) {
        let mut g = self.lock();
        g.in_flight -= 1;
        self.wake.notify_all();
    }

    fn work(&self) {
        while let Some(job) = self.next_job() {
            self.process(job);
            self.finish_job();
        }
    }

    fn process(&self, job: Job) {
        let net = &self.problem.net;
        let m = &self.problem.initial;
        let Job { solution: ps, origin } = job;

        let mut delta: Vec<(SccTriple, u64, Constraint)> = Vec::new();
        if origin == Origin::Leaf {
            let reached = net
                .fire_sequence(m, &ps.sequence)
                .expect("partial solutions hold fireable prefixes");
            for triple in build_dependency_graph(net, &reached, &ps.remainder) {
                let tokens = estimate_tokens(&triple, net, &reached, &ps.remainder);
                match make_increment_constraint(&triple.places, tokens, &ps.sequence, &ps.remainder, net) {
                    Ok(c) => delta.push((triple, tokens, c)),
                    Err(_) => {
                        self.lock().fail([(&triple, tokens)], &ps, FailureReason::NoProducer);
                        return;
                    }
                }
            }
        }
        let mut family = ps.constraints.clone();
        let mut added = false;
        for (_, _, c) in &delta {
            added |= family.insert(c.clone());
        }

        if self.config.optimizations.memo {
            let mut g = self.lock();
            if !g.memo.insert(family.clone()) {
                g.stats.memo_hits += 1;
                return;
            }
        }

        let mut system = self.base.clone();
        add_family(&mut system, &family);
        let (outcome, solve_stats) = solve_omega_min_with_stats(&system, &self.config.solve_budget);
        let y = {
            let mut g = self.lock();
            g.stats.ilp_calls += 1;
            g.stats.ilp_nodes += solve_stats.nodes;
            g.stats.ilp_pivots += solve_stats.pivots;
            match outcome {
                SolveOutcome::Solution(y) => y,
                SolveOutcome::Infeasible => {
                    if origin == Origin::Seed {
                        g.collector.mark_state_equation_infeasible();
                    }
                    if added {
                        g.fail(delta.iter().map(|(t, n, _)| (t, *n)), &ps, FailureReason::InfeasibleAfterAdd);
                    }
                    return;
                }
                SolveOutcome::BudgetExceeded => {
                    g.poison("integer solver budget exceeded");
                    return;
                }
            }
        };
        debug_assert!(omega_compare(&y, &ps.x).is_ge(), "refinement is conservative");

        let owner = {
            let mut g = self.lock();
            if added {
                g.stats.increment_refinements += 1;
            }
            let owner = g.branching.len();
            g.branching.push(0);
            let jumps = JumpFamily::new(
                family.clone(),
                ps.x.clone(),
                &y,
                ps.sequence.clone(),
                ps.remainder.clone(),
            );
            if !jumps.is_exhausted() {
                let max_queue = self.config.max_queue;
                g.push(ps.x.sum(), Item::Family { family: jumps, owner }, max_queue);
            }
            owner
        };

        let parent = (origin == Origin::Leaf && added && ps.x.le(&y)).then_some(&ps);
        let report = realize(net, m, &y, &self.search, parent);
        let mut g = self.lock();
        g.stats.search_nodes += report.nodes;
        match report.realization {
            Realization::Full(sequence) => {
                if let Err(e) = self.problem.check_witness(&sequence) {
                    panic!("realized sequence fails replay: {e}");
                }
                if !matches!(g.stop, Some(Stop::Witness(_))) {
                    g.stop = Some(Stop::Witness(sequence));
                }
                self.wake.notify_all();
            }
            Realization::Partial {
                leaves,
                pruned,
                complete,
            } => {
                if !complete {
                    g.poison("search node budget exceeded");
                }
                g.stats.pruned_leaves += pruned.len() as u64;
                if leaves.is_empty() && !pruned.is_empty() {
                    g.fail(delta.iter().map(|(t, n, _)| (t, *n)), &ps, FailureReason::PrunedNoProgress);
                }
                let leaf_family = if family.iter().any(Constraint::is_jump) {
                    transform_jumps(&family, &y)
                } else {
                    family
                };
                let size = y.sum();
                for leaf in leaves {
                    let key = (leaf_family.clone(), y.clone(), leaf.sequence.clone());
                    if !g.leaves_seen.insert(key) {
                        continue;
                    }
                    g.stats.partial_solutions += 1;
                    g.branching[owner] += 1;
                    let job = Job {
                        solution: PartialSolution {
                            constraints: leaf_family.clone(),
                            x: y.clone(),
                            sequence: leaf.sequence,
                            remainder: leaf.remainder,
                        },
                        origin: Origin::Leaf,
                    };
                    let max_queue = self.config.max_queue;
                    g.push(size, Item::Job(job), max_queue);
                }
                self.wake.notify_all();
            }
        }
    }
}

/// Decides whether the problem's target is reachable.
pub fn cegar_solve(problem: &ReachabilityProblem, config: &EngineConfig) -> Run {
    let started = Instant::now();
    let opts = config.optimizations;
    let ctx = Context {
        problem,
        config,
        base: build_state_equation(problem),
        search: SearchOptions {
            stubborn: opts.stubborn,
            subtree_cut: opts.subtree_cut,
            prune: opts.prune,
            max_nodes: config.search_nodes.max(1),
        },
        state: Mutex::new(Shared::default()),
        wake: Condvar::new(),
    };
    let n = problem.net.transition_count();
    ctx.lock().push(
        0,
        Item::Job(Job {
            solution: PartialSolution {
                constraints: ConstraintFamily::new(),
                x: TransitionVector::zeros(n),
                sequence: Vec::new(),
                remainder: TransitionVector::zeros(n),
            },
            origin: Origin::Seed,
        }),
        config.max_queue.max(1),
    );

    let workers = config.workers.max(1);
    if workers == 1 {
        ctx.work();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| ctx.work());
            }
        });
    }

    let shared = ctx.state.into_inner().expect("engine state lock");
    let mut stats = shared.stats;
    if !shared.branching.is_empty() {
        let total: u64 = shared.branching.iter().sum();
        stats.branching_avg = total as f64 / shared.branching.len() as f64;
        stats.branching_max = shared.branching.iter().copied().max().unwrap_or(0);
    }
    if !config.deterministic {
        stats.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    let outcome = match shared.stop {
        Some(Stop::Witness(seq)) => Outcome::Witness(seq),
        Some(Stop::Limit(reason)) => Outcome::Inconclusive {
            reason,
            diagnostics: build_report(problem, &shared.collector),
        },
        None => match shared.poisoned {
            Some(reason) => Outcome::Inconclusive {
                reason,
                diagnostics: build_report(problem, &shared.collector),
            },
            None => Outcome::Unreachable(build_report(problem, &shared.collector)),
        },
    };
    Run { outcome, stats }
}
