//! Depth-first search for firing sequences realizing a solution of the state
//! equation, with the reductions that keep the tree small.

mod prune;
mod stubborn;

use std::collections::HashSet;

pub use prune::{check_prune, progress_profile, PruneDecision, ProgressProfile};
pub use stubborn::stubborn_set;

use crate::cegar::PartialSolution;
use crate::net::{Marking, PetriNet, TransitionId, TransitionVector};

/// Default node budget of one search.
pub const DEFAULT_SEARCH_NODES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Expand only enabled members of a stubborn set.
    pub stubborn: bool,
    /// Skip nodes whose remaining vector was already seen in this tree.
    pub subtree_cut: bool,
    /// Filter leaves with [`check_prune`] against the parent, when given.
    pub prune: bool,
    pub max_nodes: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            stubborn: true,
            subtree_cut: true,
            prune: true,
            max_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

/// A maximal fireable prefix that does not use up the solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub sequence: Vec<TransitionId>,
    pub remainder: TransitionVector,
    pub marking: Marking,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    Full(Vec<TransitionId>),
    Partial {
        leaves: Vec<Leaf>,
        pruned: Vec<(Leaf, PruneDecision)>,
        /// False when the node budget cut the search short.
        complete: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub realization: Realization,
    pub nodes: u64,
    /// Children skipped by the visited store.
    pub cut: u64,
}

struct Search<'a> {
    net: &'a PetriNet,
    options: &'a SearchOptions,
    marking: Marking,
    remaining: TransitionVector,
    fired: Vec<TransitionId>,
}

impl Search<'_> {
    fn children(&self) -> Vec<TransitionId> {
        let enabled = |t: &TransitionId| self.net.is_enabled(&self.marking, *t);
        if self.options.stubborn {
            let set: Vec<TransitionId> = stubborn_set(self.net, &self.marking, &self.remaining)
                .into_iter()
                .filter(enabled)
                .collect();
            if !set.is_empty() {
                return set;
            }
        }
        // Without a reduction, or when the stubborn set is dead but some other
        // remaining transition is not, leaves must still be maximal.
        self.remaining.support().filter(enabled).collect()
    }

    fn fire(&mut self, t: TransitionId) {
        let position = self.fired.len() + 1;
        self.net
            .fire_in_place(&mut self.marking, t, position)
            .expect("only enabled transitions are expanded");
        self.remaining.decrement(t);
        self.fired.push(t);
    }

    fn undo(&mut self) {
        let t = self.fired.pop().expect("undo follows fire");
        self.net.unfire_in_place(&mut self.marking, t);
        self.remaining.increment(t);
    }

    fn leaf(&self) -> Leaf {
        Leaf {
            sequence: self.fired.clone(),
            remainder: self.remaining.clone(),
            marking: self.marking.clone(),
        }
    }
}

/// Searches for a firing sequence from `m` with Parikh vector `y`. Returns it
/// as soon as one is found; otherwise returns every leaf of the reduced tree.
/// With a `parent`, leaves are checked against it by [`check_prune`].
pub fn realize(
    net: &PetriNet,
    m: &Marking,
    y: &TransitionVector,
    options: &SearchOptions,
    parent: Option<&PartialSolution>,
) -> SearchReport {
    let mut search = Search {
        net,
        options,
        marking: m.clone(),
        remaining: y.clone(),
        fired: Vec::new(),
    };
    let mut nodes = 1u64;
    let mut cut = 0u64;
    if y.is_zero() {
        return SearchReport {
            realization: Realization::Full(Vec::new()),
            nodes,
            cut,
        };
    }
    let mut visited: HashSet<TransitionVector> = HashSet::new();
    if options.subtree_cut {
        visited.insert(y.clone());
    }
    let mut leaves = Vec::new();
    let mut pruned = Vec::new();
    let mut complete = true;
    let keep = |leaf: Leaf, leaves: &mut Vec<Leaf>, pruned: &mut Vec<(Leaf, PruneDecision)>| {
        let decision = match parent {
            Some(parent) if options.prune => {
                let candidate = PartialSolution {
                    constraints: Default::default(),
                    x: y.clone(),
                    sequence: leaf.sequence.clone(),
                    remainder: leaf.remainder.clone(),
                };
                check_prune(net, m, parent, &candidate)
            }
            _ => PruneDecision::Keep,
        };
        if decision == PruneDecision::Keep {
            leaves.push(leaf);
        } else {
            pruned.push((leaf, decision));
        }
    };

    let root = search.children();
    if root.is_empty() {
        keep(search.leaf(), &mut leaves, &mut pruned);
    }
    let mut stack: Vec<(Vec<TransitionId>, usize)> = vec![(root, 0)];
    'search: while let Some((children, next)) = stack.last_mut() {
        let Some(&t) = children.get(*next) else {
            stack.pop();
            if !stack.is_empty() {
                search.undo();
            }
            continue;
        };
        *next += 1;
        search.fire(t);
        if options.subtree_cut && !visited.insert(search.remaining.clone()) {
            cut += 1;
            search.undo();
            continue;
        }
        nodes += 1;
        if search.remaining.is_zero() {
            return SearchReport {
                realization: Realization::Full(search.fired),
                nodes,
                cut,
            };
        }
        if nodes >= options.max_nodes {
            complete = false;
            break 'search;
        }
        let grandchildren = search.children();
        if grandchildren.is_empty() {
            keep(search.leaf(), &mut leaves, &mut pruned);
            search.undo();
        } else {
            stack.push((grandchildren, 0));
        }
    }
    SearchReport {
        realization: Realization::Partial {
            leaves,
            pruned,
            complete,
        },
        nodes,
        cut,
    }
}
