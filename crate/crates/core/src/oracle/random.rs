//! Seeded generators for small random nets and linear systems.

use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ilp::{LinearSystem, Relation};
use crate::net::{Marking, Mode, NetBuilder, PetriNet, ReachabilityProblem, TransitionId};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomNetParams {
    pub max_places: usize,
    pub max_transitions: usize,
    /// Probability of each possible arc.
    pub density: f64,
    pub max_weight: u64,
    pub max_tokens: u64,
    /// Only arcs that respect a fixed interleaved order, so the flow relation
    /// has no cycle.
    pub acyclic: bool,
    /// Probability of adding one `t >= 1` side constraint.
    pub require_probability: f64,
}

impl Default for RandomNetParams {
    fn default() -> Self {
        RandomNetParams {
            max_places: 5,
            max_transitions: 5,
            density: 0.3,
            max_weight: 2,
            max_tokens: 3,
            acyclic: false,
            require_probability: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    /// The marking after a random firing sequence.
    Reachable,
    /// Each place drawn uniformly from `0..=max_tokens`.
    Uniform,
}

fn random_net(rng: &mut ChaCha8Rng, params: &RandomNetParams) -> PetriNet {
    let places = rng.random_range(1..=params.max_places.max(1));
    let transitions = rng.random_range(1..=params.max_transitions.max(1));
    let mut b = NetBuilder::new();
    let ps: Vec<_> = (0..places).map(|i| b.place(&format!("p{i}")).expect("fresh name")).collect();
    let ts: Vec<_> = (0..transitions)
        .map(|i| b.transition(&format!("t{i}")).expect("fresh name"))
        .collect();
    for (j, &t) in ts.iter().enumerate() {
        let mut consumes = false;
        for (i, &s) in ps.iter().enumerate() {
            // In acyclic mode place i precedes transition j iff i <= j.
            let may_consume = !params.acyclic || i <= j;
            let may_produce = !params.acyclic || i > j;
            if may_consume && rng.random_bool(params.density) {
                b.consume(t, s, rng.random_range(1..=params.max_weight)).expect("positive");
                consumes = true;
            }
            if may_produce && rng.random_bool(params.density) {
                b.produce(t, s, rng.random_range(1..=params.max_weight)).expect("positive");
            }
        }
        // A source transition would make an acyclic net unbounded.
        if params.acyclic && !consumes {
            let i = rng.random_range(0..=j.min(places - 1));
            b.consume(t, ps[i], 1).expect("positive");
        }
    }
    for &s in &ps {
        b.mark(s, rng.random_range(0..=params.max_tokens)).expect("declared");
    }
    b.build().expect("nonempty")
}

/// A random problem determined entirely by `seed`.
pub fn random_problem(seed: u64, params: &RandomNetParams, kind: TargetKind) -> ReachabilityProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = random_net(&mut rng, params);
    let initial = net.initial_marking().clone();
    let target = match kind {
        TargetKind::Reachable => {
            let mut m = initial.clone();
            for _ in 0..rng.random_range(0..=6) {
                let enabled: Vec<TransitionId> =
                    net.transitions().filter(|&t| net.is_enabled(&m, t)).collect();
                let Some(&t) = enabled.choose(&mut rng) else { break };
                m = net.fire(&m, t).expect("enabled");
            }
            m
        }
        TargetKind::Uniform => Marking::from_vec(
            (0..net.place_count())
                .map(|_| rng.random_range(0..=params.max_tokens))
                .collect(),
        ),
    };
    let mut required = Vec::new();
    if rng.random_bool(params.require_probability) {
        let t = TransitionId(rng.random_range(0..net.transition_count()));
        required.push((t, 1));
    }
    ReachabilityProblem {
        net,
        initial,
        target,
        mode: Mode::Reach,
        required,
    }
}

/// A system with 1 to 5 variables and 1 to 3 rows, coefficients in `-3..=3`.
pub fn random_system(seed: u64) -> LinearSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=5);
    let mut system = LinearSystem::new((0..n).map(|j| format!("x{j}")).collect());
    for i in 0..rng.random_range(1..=3) {
        let coeffs = (0..n)
            .map(|j| (j, BigInt::from(rng.random_range(-3i64..=3))))
            .collect();
        let relation = *[Relation::Eq, Relation::Eq, Relation::Ge, Relation::Le]
            .choose(&mut rng)
            .expect("nonempty");
        let rhs = BigInt::from(rng.random_range(-4i64..=6));
        system.add_row(coeffs, relation, rhs, format!("r{i}"));
    }
    system
}

/// Up to three `x_j < bound` pairs with bounds in `1..=3`.
pub fn random_jump_set(seed: u64, num_vars: usize) -> Vec<(usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a75_6d70);
    let count = rng.random_range(1..=3usize.min(num_vars.max(1)));
    let mut vars: Vec<usize> = (0..num_vars).collect();
    let mut out = Vec::new();
    for _ in 0..count {
        if vars.is_empty() {
            break;
        }
        let j = vars.remove(rng.random_range(0..vars.len()));
        out.push((j, rng.random_range(1..=3)));
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_problem() {
        let params = RandomNetParams::default();
        let a = random_problem(7, &params, TargetKind::Uniform);
        let b = random_problem(7, &params, TargetKind::Uniform);
        assert_eq!(crate::net::render_net(&a.net), crate::net::render_net(&b.net));
        assert_eq!(a.target, b.target);
    }

    #[test]
    fn sizes_respect_limits() {
        let params = RandomNetParams::default();
        for seed in 0..50 {
            let p = random_problem(seed, &params, TargetKind::Reachable);
            assert!(p.net.place_count() <= 5 && p.net.transition_count() <= 5);
            assert!(p.initial.as_slice().iter().all(|&c| c <= 3));
            let s = random_system(seed);
            assert!((1..=5).contains(&s.num_vars()));
        }
    }

    #[test]
    fn acyclic_nets_have_no_flow_cycle() {
        let params = RandomNetParams {
            acyclic: true,
            ..RandomNetParams::default()
        };
        for seed in 0..50 {
            let net = random_problem(seed, &params, TargetKind::Uniform).net;
            for t in net.transitions() {
                for &(s, _) in net.pre(t) {
                    assert!(s.0 <= t.0);
                }
                for &(s, _) in net.post(t) {
                    assert!(s.0 > t.0);
                }
            }
        }
    }
}
