use std::collections::BTreeMap;

use crate::cegar::PartialSolution;
use crate::net::{Marking, PetriNet, TransitionId, TransitionVector};

/// Per remainder transition, the fewest tokens it ever lacked along a prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgressProfile(pub BTreeMap<TransitionId, u64>);

impl ProgressProfile {
    pub fn get(&self, t: TransitionId) -> Option<u64> {
        self.0.get(&t).copied()
    }
}

/// Minimum of the missing-token measure of each `t` in the support of
/// `remainder` over every marking visited while firing `sequence` from `m`.
pub fn progress_profile(
    net: &PetriNet,
    m: &Marking,
    sequence: &[TransitionId],
    remainder: &TransitionVector,
) -> ProgressProfile {
    let targets: Vec<TransitionId> = remainder.support().collect();
    let mut best: BTreeMap<TransitionId, u64> =
        targets.iter().map(|&t| (t, net.missing_tokens(m, t))).collect();
    let mut marking = m.clone();
    for (i, &t) in sequence.iter().enumerate() {
        net.fire_in_place(&mut marking, t, i + 1)
            .expect("profiled sequences are fireable");
        for &u in &targets {
            let miss = net.missing_tokens(&marking, u);
            let entry = best.get_mut(&u).expect("entry exists");
            *entry = (*entry).min(miss);
        }
    }
    ProgressProfile(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneDecision {
    Keep,
    /// The leaf fired nothing beyond the parent's prefix.
    NoNewFiring,
    /// The leaf fired exactly the added cycle without getting any remainder
    /// transition closer to enabledness.
    NoProgress,
}

/// Decides whether `leaf`, found after adding increment constraints to
/// `parent`, can be dropped. Callers must only ask when the leaf's solution
/// dominates the parent's componentwise.
pub fn check_prune(
    net: &PetriNet,
    m: &Marking,
    parent: &PartialSolution,
    leaf: &PartialSolution,
) -> PruneDecision {
    if leaf.sequence == parent.sequence {
        return PruneDecision::NoNewFiring;
    }
    if leaf.sequence.starts_with(&parent.sequence) && leaf.remainder == parent.remainder {
        let before = progress_profile(net, m, &parent.sequence, &parent.remainder);
        let after = progress_profile(net, m, &leaf.sequence, &parent.remainder);
        let improved = before.0.iter().any(|(t, &b)| after.get(*t).is_some_and(|a| a < b));
        if !improved {
            return PruneDecision::NoProgress;
        }
    }
    PruneDecision::Keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cegar::ConstraintFamily;
    use crate::net::fixtures::NET_A;
    use crate::net::{parse_net, NetBuilder};

    fn ps(seq: Vec<TransitionId>, x: TransitionVector, r: TransitionVector) -> PartialSolution {
        PartialSolution {
            constraints: ConstraintFamily::new(),
            x,
            sequence: seq,
            remainder: r,
        }
    }

    #[test]
    fn profile_entries() {
        let net = parse_net(NET_A).unwrap();
        let r = TransitionVector::from_pairs(&net, &[("t", 1)]).unwrap();
        let m = net.initial_marking();
        let t = net.transition("t").unwrap();
        assert_eq!(progress_profile(&net, m, &[], &r).get(t), Some(1));
        let u = net.parse_sequence("u").unwrap();
        assert_eq!(progress_profile(&net, m, &u, &r).get(t), Some(0));
    }

    #[test]
    fn nothing_new_fired_is_pruned() {
        let net = parse_net(NET_A).unwrap();
        let m = net.initial_marking();
        let x = TransitionVector::from_vec(vec![1, 1, 0, 0]);
        let y = TransitionVector::from_vec(vec![1, 1, 1, 1]);
        let parent = ps(vec![], x.clone(), x);
        let leaf = ps(vec![], y.clone(), y);
        assert_eq!(check_prune(&net, m, &parent, &leaf), PruneDecision::NoNewFiring);
    }

    #[test]
    fn cycle_with_progress_is_kept() {
        // t needs two tokens on s; firing a puts one there.
        let mut b = NetBuilder::new();
        let s = b.place("s").unwrap();
        let p = b.place("p").unwrap();
        let t = b.transition("t").unwrap();
        let ta = b.transition("a").unwrap();
        let tb = b.transition("b").unwrap();
        b.consume(t, s, 2).unwrap();
        b.consume(ta, p, 1).unwrap();
        b.produce(ta, s, 1).unwrap();
        b.consume(tb, s, 1).unwrap();
        b.produce(tb, p, 1).unwrap();
        b.mark(p, 1).unwrap();
        let net = b.build().unwrap();
        let m = net.initial_marking();
        let r = TransitionVector::from_vec(vec![1, 0, 0]);
        let parent = ps(vec![], r.clone(), r.clone());
        let y = TransitionVector::from_vec(vec![1, 1, 1]);
        let leaf = ps(vec![ta, tb], y, r);
        // Missing tokens drop from 2 to 1 after a.
        assert_eq!(check_prune(&net, m, &parent, &leaf), PruneDecision::Keep);
    }

    fn b_with_token() -> PetriNet {
        let mut b = NetBuilder::new();
        let s = b.place("s").unwrap();
        let p = b.place("p").unwrap();
        let t = b.transition("t").unwrap();
        let ta = b.transition("a").unwrap();
        let tb = b.transition("b").unwrap();
        b.consume(t, s, 2).unwrap();
        b.consume(ta, p, 1).unwrap();
        b.produce(ta, s, 1).unwrap();
        b.consume(tb, s, 1).unwrap();
        b.produce(tb, p, 1).unwrap();
        b.mark(s, 1).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn cycle_that_returns_tokens_is_pruned() {
        // With one token already on s, b then a moves it away and back.
        let net = b_with_token();
        let m = net.initial_marking();
        let (ta, tb) = (net.transition("a").unwrap(), net.transition("b").unwrap());
        let r = TransitionVector::from_vec(vec![1, 0, 0]);
        let parent = ps(vec![], r.clone(), r.clone());
        let leaf = ps(vec![tb, ta], TransitionVector::from_vec(vec![1, 1, 1]), r);
        assert_eq!(check_prune(&net, m, &parent, &leaf), PruneDecision::NoProgress);
    }
}
