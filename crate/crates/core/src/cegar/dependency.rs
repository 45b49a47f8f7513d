//! Token-starvation analysis for a stuck partial solution: which place sets
//! must receive more tokens, how many, and which increment constraint forces
//! the solver to produce them.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::Constraint;
use crate::net::{Marking, PetriNet, PlaceId, TransitionId, TransitionVector};

/// A source component of the dependency graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SccTriple {
    /// Places of the component that lack tokens.
    pub places: BTreeSet<PlaceId>,
    /// Remainder transitions inside the component.
    pub inside: BTreeSet<TransitionId>,
    /// Remainder transitions outside the component waiting on its places.
    pub dependent: BTreeSet<TransitionId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Place(PlaceId),
    Transition(TransitionId),
}

/// Builds the graph of underfunded places and remainder transitions and
/// returns one triple per source SCC, ordered by smallest place.
pub fn build_dependency_graph(
    net: &PetriNet,
    marking: &Marking,
    remainder: &TransitionVector,
) -> Vec<SccTriple> {
    let mut graph: DiGraph<Node, ()> = DiGraph::new();
    let mut index: BTreeMap<Node, NodeIndex> = BTreeMap::new();
    let mut node = |graph: &mut DiGraph<Node, ()>, n: Node| {
        *index.entry(n).or_insert_with(|| graph.add_node(n))
    };

    let transitions: Vec<TransitionId> = remainder.support().collect();
    for &t in &transitions {
        let ti = node(&mut graph, Node::Transition(t));
        for &(s, w) in net.pre(t) {
            if w > marking.get(s) {
                let si = node(&mut graph, Node::Place(s));
                graph.add_edge(si, ti, ());
            }
        }
    }
    // Producer edges only towards places already known to be underfunded.
    let starving: Vec<(PlaceId, NodeIndex)> = graph
        .node_indices()
        .filter_map(|i| match graph[i] {
            Node::Place(s) => Some((s, i)),
            Node::Transition(_) => None,
        })
        .collect();
    for &t in &transitions {
        let ti = graph
            .node_indices()
            .find(|&i| graph[i] == Node::Transition(t))
            .expect("transition node exists");
        for &(s, si) in &starving {
            if net.post_weight(t, s) > net.pre_weight(s, t) {
                graph.add_edge(ti, si, ());
            }
        }
    }

    let components = tarjan_scc(&graph);
    let mut component_of = vec![0usize; graph.node_count()];
    for (c, members) in components.iter().enumerate() {
        for &i in members {
            component_of[i.index()] = c;
        }
    }
    let mut has_incoming = vec![false; components.len()];
    for e in graph.edge_indices() {
        let (a, b) = graph.edge_endpoints(e).expect("edge exists");
        if component_of[a.index()] != component_of[b.index()] {
            has_incoming[component_of[b.index()]] = true;
        }
    }

    let mut triples = Vec::new();
    for (c, members) in components.iter().enumerate() {
        if has_incoming[c] {
            continue;
        }
        let mut places = BTreeSet::new();
        let mut inside = BTreeSet::new();
        for &i in members {
            match graph[i] {
                Node::Place(s) => {
                    places.insert(s);
                }
                Node::Transition(t) => {
                    inside.insert(t);
                }
            }
        }
        if places.is_empty() {
            // A lone transition without underfunded inputs; cannot happen for
            // maximal partial solutions.
            continue;
        }
        let dependent: BTreeSet<TransitionId> = transitions
            .iter()
            .copied()
            .filter(|t| !inside.contains(t))
            .filter(|&t| places.iter().any(|&s| net.pre_weight(s, t) > marking.get(s)))
            .collect();
        triples.push(SccTriple {
            places,
            inside,
            dependent,
        });
    }
    triples.sort();
    triples
}

/// Lower estimate of the tokens the triple's places need before one of its
/// transitions can fire. Always at least 1.
pub fn estimate_tokens(
    triple: &SccTriple,
    net: &PetriNet,
    marking: &Marking,
    remainder: &TransitionVector,
) -> u64 {
    if !triple.inside.is_empty() {
        let n = triple
            .inside
            .iter()
            .map(|&t| {
                triple
                    .places
                    .iter()
                    .map(|&s| net.pre_weight(s, t).saturating_sub(marking.get(s)))
                    .sum::<u64>()
            })
            .min()
            .unwrap_or(1);
        return n.max(1);
    }
    let s = *triple.places.first().expect("triples have places");
    let mut groups: BTreeMap<u64, Vec<TransitionId>> = BTreeMap::new();
    for &t in &triple.dependent {
        groups.entry(net.post_weight(t, s)).or_default().push(t);
    }
    let mut c: i128 = 0;
    let mut n: i128 = 0;
    for (&j, group) in groups.iter().rev() {
        let j = i128::from(j);
        c += j;
        for &t in group {
            c += i128::from(remainder.get(t)) * (i128::from(net.pre_weight(s, t)) - j);
        }
        if c > 0 {
            n += c;
            c = -j;
        }
    }
    u64::try_from(n.max(1)).unwrap_or(u64::MAX)
}

/// No transition outside the remainder adds tokens to the place set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoProducer;

/// The increment constraint demanding `tokens` more tokens on `places` from
/// transitions that are not part of the remainder.
pub fn make_increment_constraint(
    places: &BTreeSet<PlaceId>,
    tokens: u64,
    sequence: &[TransitionId],
    remainder: &TransitionVector,
    net: &PetriNet,
) -> Result<Constraint, NoProducer> {
    let fired = TransitionVector::parikh(net.transition_count(), sequence);
    let mut coeffs = Vec::new();
    let mut rhs = i128::from(tokens);
    for t in net.transitions() {
        if remainder.get(t) > 0 {
            continue;
        }
        let gain: i128 = places.iter().map(|&s| net.effect(s, t)).sum();
        if gain > 0 {
            coeffs.push((t, gain));
            rhs += gain * i128::from(fired.get(t));
        }
    }
    if coeffs.is_empty() {
        return Err(NoProducer);
    }
    Ok(Constraint::increment(coeffs, rhs as u128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::{NET_A, NET_C};
    use crate::net::{parse_net, NetBuilder};

    fn places(net: &PetriNet, names: &[&str]) -> BTreeSet<PlaceId> {
        names.iter().map(|n| net.place(n).unwrap()).collect()
    }

    fn transitions(net: &PetriNet, names: &[&str]) -> BTreeSet<TransitionId> {
        names.iter().map(|n| net.transition(n).unwrap()).collect()
    }

    #[test]
    fn borrowing_cycle_is_one_source_component() {
        let net = parse_net(NET_A).unwrap();
        let r = TransitionVector::from_pairs(&net, &[("t", 1), ("t'", 1)]).unwrap();
        let triples = build_dependency_graph(&net, net.initial_marking(), &r);
        assert_eq!(
            triples,
            vec![SccTriple {
                places: places(&net, &["s1", "s2"]),
                inside: transitions(&net, &["t", "t'"]),
                dependent: BTreeSet::new(),
            }]
        );
        assert_eq!(estimate_tokens(&triples[0], &net, net.initial_marking(), &r), 1);
        let c = make_increment_constraint(&triples[0].places, 1, &[], &r, &net).unwrap();
        assert_eq!(c, Constraint::at_least(net.transition("u").unwrap(), 1));
    }

    #[test]
    fn produced_so_far_raises_the_bound() {
        let net = parse_net(NET_A).unwrap();
        let r = TransitionVector::from_pairs(&net, &[("t", 1), ("t'", 1)]).unwrap();
        let seq = net.parse_sequence("u u'").unwrap();
        let c = make_increment_constraint(&places(&net, &["s1", "s2"]), 1, &seq, &r, &net).unwrap();
        assert_eq!(c, Constraint::at_least(net.transition("u").unwrap(), 2));
    }

    #[test]
    fn place_only_component() {
        let mut b = NetBuilder::new();
        let s = b.place("s").unwrap();
        let t = b.transition("t").unwrap();
        b.consume(t, s, 1).unwrap();
        let net = b.build().unwrap();
        let r = TransitionVector::from_vec(vec![1]);
        let triples = build_dependency_graph(&net, net.initial_marking(), &r);
        assert_eq!(
            triples,
            vec![SccTriple {
                places: [s].into(),
                inside: BTreeSet::new(),
                dependent: [t].into(),
            }]
        );
        assert_eq!(
            make_increment_constraint(&triples[0].places, 1, &[], &r, &net),
            Err(NoProducer)
        );
    }

    #[test]
    fn grouped_estimate() {
        let mut b = NetBuilder::new();
        let s = b.place("s").unwrap();
        let a = b.transition("a").unwrap();
        let bb = b.transition("b").unwrap();
        b.consume(a, s, 2).unwrap();
        b.produce(a, s, 1).unwrap();
        b.consume(bb, s, 3).unwrap();
        let net = b.build().unwrap();
        let r = TransitionVector::from_vec(vec![1, 1]);
        let triples = build_dependency_graph(&net, net.initial_marking(), &r);
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].dependent, [a, bb].into());
        assert_eq!(estimate_tokens(&triples[0], &net, net.initial_marking(), &r), 4);
    }

    #[test]
    fn competing_cycle_needs_u() {
        let net = parse_net(NET_C).unwrap();
        let m = net.fire_sequence(net.initial_marking(), &net.parse_sequence("d").unwrap()).unwrap();
        let r = TransitionVector::from_pairs(&net, &[("k1", 1), ("k2", 1), ("x2", 1)]).unwrap();
        let triples = build_dependency_graph(&net, &m, &r);
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].places, places(&net, &["c1", "c2"]));
        assert_eq!(triples[0].inside, transitions(&net, &["k1", "k2"]));
        assert_eq!(triples[0].dependent, BTreeSet::new());
        let seq = net.parse_sequence("d").unwrap();
        let c = make_increment_constraint(&places(&net, &["c1"]), 1, &seq, &r, &net).unwrap();
        assert_eq!(c, Constraint::at_least(net.transition("u").unwrap(), 1));
    }
}
