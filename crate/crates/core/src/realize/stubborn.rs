use crate::net::{Marking, PetriNet, PlaceId, TransitionId, TransitionVector};

/// Closure over the remaining transitions, seeded with the lowest-indexed one.
/// Enabled members pull in every remaining transition sharing an input place;
/// disabled members pull in the remaining producers of their lowest-indexed
/// insufficiently marked place. Returned in ascending index order.
pub fn stubborn_set(
    net: &PetriNet,
    marking: &Marking,
    remaining: &TransitionVector,
) -> Vec<TransitionId> {
    let support: Vec<TransitionId> = remaining.support().collect();
    let Some(&seed) = support.first() else {
        return Vec::new();
    };
    let mut member = vec![false; net.transition_count()];
    member[seed.0] = true;
    let mut work = vec![seed];
    while let Some(t) = work.pop() {
        let mut add = |t2: TransitionId, work: &mut Vec<TransitionId>| {
            if !member[t2.0] {
                member[t2.0] = true;
                work.push(t2);
            }
        };
        if net.is_enabled(marking, t) {
            for &t2 in &support {
                if shares_input(net, t, t2) {
                    add(t2, &mut work);
                }
            }
        } else {
            let scapegoat = scapegoat(net, marking, t);
            for &t2 in &support {
                if net.post_weight(t2, scapegoat) > net.pre_weight(scapegoat, t2) {
                    add(t2, &mut work);
                }
            }
        }
    }
    support.into_iter().filter(|t| member[t.0]).collect()
}

fn shares_input(net: &PetriNet, a: TransitionId, b: TransitionId) -> bool {
    net.pre(a).iter().any(|&(s, _)| net.pre_weight(s, b) > 0)
}

fn scapegoat(net: &PetriNet, marking: &Marking, t: TransitionId) -> PlaceId {
    net.pre(t)
        .iter()
        .find(|&&(s, w)| marking.get(s) < w)
        .map(|&(s, _)| s)
        .expect("a disabled transition has an insufficiently marked place")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::NET_A;
    use crate::net::parse_net;

    #[test]
    fn borrowing_net_fires_u_first() {
        let net = parse_net(NET_A).unwrap();
        let y = TransitionVector::from_vec(vec![1, 1, 1, 1]);
        let set = stubborn_set(&net, net.initial_marking(), &y);
        let enabled: Vec<&str> = set
            .iter()
            .filter(|&&t| net.is_enabled(net.initial_marking(), t))
            .map(|&t| net.transition_name(t))
            .collect();
        assert_eq!(enabled, ["u"]);
        assert!(set.contains(&net.transition("t").unwrap()));
        assert!(!set.contains(&net.transition("u'").unwrap()));
    }

    #[test]
    fn conflict_free_singleton() {
        let net = parse_net(NET_A).unwrap();
        let y = TransitionVector::from_vec(vec![0, 0, 1, 0]);
        assert_eq!(stubborn_set(&net, net.initial_marking(), &y), vec![TransitionId(2)]);
    }

    #[test]
    fn dead_remainder_has_no_enabled_member() {
        let net = parse_net(NET_A).unwrap();
        let y = TransitionVector::from_vec(vec![1, 1, 0, 0]);
        let set = stubborn_set(&net, net.initial_marking(), &y);
        assert!(set.iter().all(|&t| !net.is_enabled(net.initial_marking(), t)));
    }
}
