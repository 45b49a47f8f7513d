//! Branch-and-bound on top of the rational simplex, and the two-phase
//! Ω-minimization built from it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::lattice::{gcd_feasibility_check, LatticeCheck};
use super::simplex::{minimize, DenseRow, LpOutcome};
use super::{LinearSystem, Relation, SolveBudget, SolveOutcome, SolveStats};
use crate::net::TransitionVector;

enum IntegerOutcome {
    Optimal(Vec<BigInt>),
    Infeasible,
    Budget,
}

struct Node {
    bounds: Vec<DenseRow>,
    x: Vec<BigRational>,
}

struct BranchAndBound<'a> {
    num_vars: usize,
    base: &'a [DenseRow],
    budget: &'a SolveBudget,
    stats: SolveStats,
}

impl BranchAndBound<'_> {
    fn relax(&mut self, extra: &[DenseRow], objective: &[BigRational]) -> Option<LpOutcome> {
        if self.stats.nodes >= self.budget.max_nodes {
            return None;
        }
        self.stats.nodes += 1;
        let rows: Vec<DenseRow> = self.base.iter().chain(extra).cloned().collect();
        let (outcome, pivots) = minimize(self.num_vars, &rows, objective, self.budget.max_pivots);
        self.stats.pivots += pivots;
        Some(outcome)
    }

    /// Minimizes an integer-valued objective over nonnegative integers.
    /// Best-bound-first; ties broken by node creation order.
    fn minimize_integer(&mut self, fixed: &[DenseRow], objective: &[BigRational]) -> IntegerOutcome {
        let mut open: BTreeMap<(BigRational, u64), Node> = BTreeMap::new();
        let mut created = 0u64;
        match self.relax(fixed, objective) {
            None | Some(LpOutcome::PivotLimit) => return IntegerOutcome::Budget,
            Some(LpOutcome::Infeasible) => return IntegerOutcome::Infeasible,
            Some(LpOutcome::Unbounded) => unreachable!("objectives are bounded below on x >= 0"),
            Some(LpOutcome::Optimal { x, value }) => {
                open.insert(
                    (value, created),
                    Node {
                        bounds: fixed.to_vec(),
                        x,
                    },
                );
                created += 1;
            }
        }
        while let Some(((_, _), node)) = open.pop_first() {
            // Largest fractional part; ties by lowest index.
            let mut branch: Option<(usize, BigRational)> = None;
            for (j, v) in node.x.iter().enumerate() {
                let frac = v - v.floor();
                if frac.is_zero() {
                    continue;
                }
                if branch.as_ref().is_none_or(|(_, best)| frac > *best) {
                    branch = Some((j, frac));
                }
            }
            let Some((j, _)) = branch else {
                // First integral node popped in bound order is optimal.
                return IntegerOutcome::Optimal(node.x.iter().map(|v| v.to_integer()).collect());
            };
            let floor = node.x[j].floor();
            for (relation, rhs) in [
                (Relation::Le, floor.clone()),
                (Relation::Ge, floor + BigRational::one()),
            ] {
                let mut coeffs = vec![BigRational::zero(); self.num_vars];
                coeffs[j] = BigRational::one();
                let mut bounds = node.bounds.clone();
                bounds.push(DenseRow {
                    coeffs,
                    relation,
                    rhs,
                });
                match self.relax(&bounds, objective) {
                    None | Some(LpOutcome::PivotLimit) => return IntegerOutcome::Budget,
                    Some(LpOutcome::Infeasible) => {}
                    Some(LpOutcome::Unbounded) => {
                        unreachable!("objectives are bounded below on x >= 0")
                    }
                    Some(LpOutcome::Optimal { x, value }) => {
                        open.insert((value, created), Node { bounds, x });
                        created += 1;
                    }
                }
            }
        }
        IntegerOutcome::Infeasible
    }
}

fn dense_rows(system: &LinearSystem) -> Vec<DenseRow> {
    system
        .rows()
        .iter()
        .map(|r| {
            let mut coeffs = vec![BigRational::zero(); system.num_vars()];
            for (j, c) in &r.coeffs {
                coeffs[*j] += BigRational::from_integer(c.clone());
            }
            DenseRow {
                coeffs,
                relation: r.relation,
                rhs: BigRational::from_integer(r.rhs.clone()),
            }
        })
        .collect()
}

fn unit(num_vars: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); num_vars];
    v[j] = BigRational::one();
    v
}

/// Returns the Ω-smallest nonnegative integer solution of `system`: minimal
/// coordinate sum, ties broken lexicographically in variable order.
pub fn solve_omega_min_with_stats(
    system: &LinearSystem,
    budget: &SolveBudget,
) -> (SolveOutcome, SolveStats) {
    let n = system.num_vars();
    if gcd_feasibility_check(system) == LatticeCheck::Refuted {
        return (SolveOutcome::Infeasible, SolveStats::default());
    }
    let base = dense_rows(system);
    let mut bb = BranchAndBound {
        num_vars: n,
        base: &base,
        budget,
        stats: SolveStats::default(),
    };
    let ones = vec![BigRational::one(); n];
    let mut best = match bb.minimize_integer(&[], &ones) {
        IntegerOutcome::Optimal(x) => x,
        IntegerOutcome::Infeasible => return (SolveOutcome::Infeasible, bb.stats),
        IntegerOutcome::Budget => return (SolveOutcome::BudgetExceeded, bb.stats),
    };
    let total: BigInt = best.iter().sum();
    let mut fixed = vec![DenseRow {
        coeffs: ones.clone(),
        relation: Relation::Eq,
        rhs: BigRational::from_integer(total),
    }];
    for j in 0..n {
        if !best[j].is_zero() {
            match bb.minimize_integer(&fixed, &unit(n, j)) {
                IntegerOutcome::Optimal(x) => best = x,
                IntegerOutcome::Infeasible => {
                    unreachable!("the previous optimum satisfies every fixed row")
                }
                IntegerOutcome::Budget => return (SolveOutcome::BudgetExceeded, bb.stats),
            }
        }
        fixed.push(DenseRow {
            coeffs: unit(n, j),
            relation: Relation::Eq,
            rhs: BigRational::from_integer(best[j].clone()),
        });
    }
    let values: Option<Vec<u64>> = best.iter().map(|v| v.to_u64()).collect();
    match values {
        Some(v) => (SolveOutcome::Solution(TransitionVector::from_vec(v)), bb.stats),
        None => (SolveOutcome::BudgetExceeded, bb.stats),
    }
}
