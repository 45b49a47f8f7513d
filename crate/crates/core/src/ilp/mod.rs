//! Exact integer programming over transition-count variables.
//!
//! Every variable is implicitly a nonnegative integer and the objective is
//! always "Ω-smallest": minimal sum, ties broken lexicographically in the
//! declared variable order. All arithmetic is on arbitrary-precision
//! integers and rationals.

mod branch;
mod lattice;
mod simplex;

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use branch::solve_omega_min_with_stats;
pub use lattice::{gcd_feasibility_check, LatticeCheck};

use crate::net::{IncidenceMatrix, Mode, ReachabilityProblem, TransitionVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        }
    }
}

/// `Σ coeffs · x  (relation)  rhs`, with sparse coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, BigInt)>,
    pub relation: Relation,
    pub rhs: BigInt,
    pub label: String,
}

impl Row {
    pub fn holds(&self, x: &[u64]) -> bool {
        let lhs: BigInt = self
            .coeffs
            .iter()
            .map(|(j, c)| c * BigInt::from(x[*j]))
            .sum();
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
        }
    }
}

/// Rows over a fixed, named variable list. The objective is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    names: Vec<String>,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(names: Vec<String>) -> Self {
        LinearSystem {
            names,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Appends a row. Zero coefficients are dropped and repeated variables
    /// merged.
    ///
    /// Panics if a coefficient refers to a variable outside the system.
    pub fn add_row(
        &mut self,
        coeffs: Vec<(usize, BigInt)>,
        relation: Relation,
        rhs: BigInt,
        label: impl Into<String>,
    ) {
        let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(coeffs.len());
        for (j, c) in coeffs {
            assert!(j < self.names.len(), "variable {j} is not part of the system");
            match merged.iter_mut().find(|(k, _)| *k == j) {
                Some(entry) => entry.1 += c,
                None => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by_key(|(j, _)| *j);
        self.rows.push(Row {
            coeffs: merged,
            relation,
            rhs,
            label: label.into(),
        });
    }

    /// Adds `x_j < bound`, stored as `x_j <= bound - 1`.
    pub fn add_strict_upper(&mut self, j: usize, bound: u64, label: impl Into<String>) {
        self.add_row(
            vec![(j, BigInt::from(1))],
            Relation::Le,
            BigInt::from(bound) - 1,
            label,
        );
    }

    pub fn is_satisfied_by(&self, x: &TransitionVector) -> bool {
        x.len() == self.num_vars() && self.rows.iter().all(|r| r.holds(x.as_slice()))
    }

    /// LP-style rendering for human inspection. Not a stable format.
    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "min: {};", self.names.join(" + "));
        for row in &self.rows {
            let mut lhs = String::new();
            for (i, (j, c)) in row.coeffs.iter().enumerate() {
                let name = &self.names[*j];
                let magnitude = c.abs();
                let sign = if c.is_negative() { "-" } else { "+" };
                if i == 0 {
                    if c.is_negative() {
                        lhs.push('-');
                    }
                } else {
                    let _ = write!(lhs, " {sign} ");
                }
                if magnitude == BigInt::from(1) {
                    lhs.push_str(name);
                } else {
                    let _ = write!(lhs, "{magnitude} {name}");
                }
            }
            if lhs.is_empty() {
                lhs.push('0');
            }
            let _ = writeln!(out, "{}: {} {} {};", row.label, lhs, row.relation.symbol(), row.rhs);
        }
        out
    }
}

/// State-equation rows (one per place, `=` in reach mode and `>=` in cover
/// mode) plus one `t >= k` row per side constraint.
pub fn build_state_equation(problem: &ReachabilityProblem) -> LinearSystem {
    let net = &problem.net;
    let incidence = IncidenceMatrix::of(net);
    let names = net.transitions().map(|t| net.transition_name(t).to_string()).collect();
    let mut system = LinearSystem::new(names);
    let relation = match problem.mode {
        Mode::Reach => Relation::Eq,
        Mode::Cover => Relation::Ge,
    };
    for s in net.places() {
        let coeffs = net
            .transitions()
            .map(|t| (t.0, BigInt::from(incidence.get(s, t))))
            .collect();
        let rhs = BigInt::from(problem.target.get(s)) - BigInt::from(problem.initial.get(s));
        system.add_row(coeffs, relation, rhs, net.place_name(s));
    }
    for &(t, k) in &problem.required {
        system.add_row(
            vec![(t.0, BigInt::from(1))],
            Relation::Ge,
            BigInt::from(k),
            format!("require_{}", net.transition_name(t)),
        );
    }
    system
}

/// Limits for one Ω-minimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveBudget {
    /// LP relaxations solved across all branch-and-bound trees of one call.
    pub max_nodes: u64,
    /// Simplex pivots per relaxation.
    pub max_pivots: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_nodes: 100_000,
            max_pivots: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(TransitionVector),
    Infeasible,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub pivots: u64,
}

/// Ω order: smaller sum first, then lexicographic in variable order.
pub fn omega_compare(x: &TransitionVector, y: &TransitionVector) -> Ordering {
    x.sum()
        .cmp(&y.sum())
        .then_with(|| x.as_slice().cmp(y.as_slice()))
}

pub fn solve_omega_min(system: &LinearSystem, budget: &SolveBudget) -> SolveOutcome {
    solve_omega_min_with_stats(system, budget).0
}

/// Seam for swapping in another integer programming backend. The built-in
/// [`ExactSolver`] is the reference implementation.
pub trait SolverBackend: Send + Sync {
    fn solve(&self, system: &LinearSystem, budget: &SolveBudget) -> (SolveOutcome, SolveStats);
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactSolver;

impl SolverBackend for ExactSolver {
    fn solve(&self, system: &LinearSystem, budget: &SolveBudget) -> (SolveOutcome, SolveStats) {
        solve_omega_min_with_stats(system, budget)
    }
}
