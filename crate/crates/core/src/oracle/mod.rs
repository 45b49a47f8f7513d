//! Naive reference engines: explicit-state breadth-first search and brute
//! force enumeration of integer solutions. Used to cross-check the solver.

mod random;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

pub use random::{random_jump_set, random_problem, random_system, RandomNetParams, TargetKind};

use crate::ilp::LinearSystem;
use crate::net::{Marking, ReachabilityProblem, TransitionId, TransitionVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Distinct search states the BFS may store.
    pub max_states: usize,
    /// Largest coordinate sum [`enumerate_solutions`] is asked for by callers.
    pub max_sum: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_states: 200_000,
            max_sum: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Witness(Vec<TransitionId>),
    Unreachable,
    Inconclusive { explored: usize },
}

type State = (Marking, Vec<u64>);

/// Breadth-first search over the full firing relation. Returns a shortest
/// witness if one exists among the first `budget.max_states` states.
pub fn bfs_reach(problem: &ReachabilityProblem, budget: &OracleBudget) -> OracleOutcome {
    let net = &problem.net;
    let caps: Vec<(TransitionId, u64)> = problem.required.clone();
    let goal = |(m, counts): &State| {
        problem.is_target(m) && counts.iter().zip(&caps).all(|(&c, &(_, k))| c >= k)
    };

    let start: State = (problem.initial.clone(), vec![0; caps.len()]);
    let mut states: Vec<(State, Option<(usize, TransitionId)>)> = vec![(start.clone(), None)];
    let mut index: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let mut frontier = VecDeque::from([0usize]);

    let path = |states: &[(State, Option<(usize, TransitionId)>)], mut i: usize| {
        let mut seq = Vec::new();
        while let Some((parent, t)) = states[i].1 {
            seq.push(t);
            i = parent;
        }
        seq.reverse();
        seq
    };

    if goal(&states[0].0) {
        return OracleOutcome::Witness(Vec::new());
    }
    while let Some(i) = frontier.pop_front() {
        for t in net.transitions() {
            let (m, counts) = &states[i].0;
            if !net.is_enabled(m, t) {
                continue;
            }
            let Ok(next) = net.fire(m, t) else {
                return OracleOutcome::Inconclusive {
                    explored: states.len(),
                };
            };
            let mut counts = counts.clone();
            for (c, &(req, k)) in counts.iter_mut().zip(&caps) {
                if req == t && *c < k {
                    *c += 1;
                }
            }
            let state = (next, counts);
            let Entry::Vacant(slot) = index.entry(state.clone()) else {
                continue;
            };
            if states.len() >= budget.max_states {
                return OracleOutcome::Inconclusive {
                    explored: states.len(),
                };
            }
            slot.insert(states.len());
            let reached_goal = goal(&state);
            states.push((state, Some((i, t))));
            if reached_goal {
                return OracleOutcome::Witness(path(&states, states.len() - 1));
            }
            frontier.push_back(states.len() - 1);
        }
    }
    OracleOutcome::Unreachable
}

/// Every nonnegative integer vector with coordinate sum at most `sum_bound`
/// that satisfies all rows, in Ω order.
pub fn enumerate_solutions(system: &LinearSystem, sum_bound: u64) -> Vec<TransitionVector> {
    fn fill(
        system: &LinearSystem,
        prefix: &mut Vec<u64>,
        left: u64,
        out: &mut Vec<TransitionVector>,
    ) {
        let n = system.num_vars();
        if prefix.len() + 1 == n {
            prefix.push(left);
            let x = TransitionVector::from_vec(prefix.clone());
            if system.is_satisfied_by(&x) {
                out.push(x);
            }
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            fill(system, prefix, left - v, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if system.num_vars() == 0 {
        let x = TransitionVector::from_vec(Vec::new());
        if system.is_satisfied_by(&x) {
            out.push(x);
        }
        return out;
    }
    for total in 0..=sum_bound {
        fill(system, &mut Vec::new(), total, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{build_state_equation, omega_compare, Relation};
    use crate::net::fixtures::{NET_A, NET_C};
    use crate::net::{parse_net, Mode};
    use num_bigint::BigInt;

    fn problem(src: &str, target: &[(&str, u64)], required: &[(&str, u64)]) -> ReachabilityProblem {
        ReachabilityProblem::from_parts(parse_net(src).unwrap(), None, target, Mode::Reach, required)
            .unwrap()
    }

    #[test]
    fn shortest_witness() {
        let p = problem(NET_C, &[("o", 1)], &[]);
        match bfs_reach(&p, &OracleBudget::default()) {
            OracleOutcome::Witness(seq) => assert_eq!(p.net.sequence_names(&seq), ["d", "x1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn initial_target_gives_empty_witness() {
        let p = problem(NET_A, &[("s3", 1)], &[]);
        assert_eq!(bfs_reach(&p, &OracleBudget::default()), OracleOutcome::Witness(vec![]));
    }

    #[test]
    fn unbounded_net_is_never_declared_unreachable() {
        // k1 k2 pumps tokens onto a2 forever, so the state space is infinite.
        let p = problem(NET_C, &[("o", 1)], &[("x2", 1)]);
        let budget = OracleBudget {
            max_states: 5_000,
            ..OracleBudget::default()
        };
        assert!(matches!(bfs_reach(&p, &budget), OracleOutcome::Inconclusive { .. }));
    }

    #[test]
    fn finite_state_space_is_exhausted() {
        // One token circulates; two can never be present.
        let p = problem(NET_A, &[("s1", 1), ("s3", 1)], &[]);
        assert_eq!(bfs_reach(&p, &OracleBudget::default()), OracleOutcome::Unreachable);
    }

    #[test]
    fn requirement_is_tracked_along_paths() {
        let p = problem(NET_A, &[("s3", 1)], &[("t", 1)]);
        match bfs_reach(&p, &OracleBudget::default()) {
            OracleOutcome::Witness(seq) => {
                assert_eq!(p.net.sequence_names(&seq), ["u", "t", "t'", "u'"])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_is_inconclusive() {
        let p = problem(NET_A, &[("s1", 5)], &[]);
        let budget = OracleBudget {
            max_states: 2,
            ..OracleBudget::default()
        };
        assert!(matches!(bfs_reach(&p, &budget), OracleOutcome::Inconclusive { .. }));
    }

    #[test]
    fn homogeneous_solutions_up_to_two() {
        let p = problem(NET_A, &[("s3", 1)], &[]);
        let sols = enumerate_solutions(&build_state_equation(&p), 2);
        let got: Vec<Vec<u64>> = sols.iter().map(|x| x.as_slice().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 0, 0]]);
        assert!(sols.windows(2).all(|w| omega_compare(&w[0], &w[1]).is_lt()));
    }

    #[test]
    fn parity_and_free_variable() {
        let mut s = LinearSystem::new(vec!["x".into()]);
        s.add_row(vec![(0, BigInt::from(2))], Relation::Eq, BigInt::from(1), "odd");
        assert!(enumerate_solutions(&s, 5).is_empty());
        let free = LinearSystem::new(vec!["x".into()]);
        let got: Vec<Vec<u64>> =
            enumerate_solutions(&free, 2).iter().map(|x| x.as_slice().to_vec()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2]]);
    }
}
