use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::NetError;

/// Index of a place in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PlaceId(pub usize);

/// Index of a transition in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TransitionId(pub usize);

/// A place/transition net with weighted arcs and a declared initial marking.
///
/// Places and transitions keep the order in which they were declared. That
/// order fixes the row/column layout of the incidence matrix and the
/// lexicographic tie-break used when comparing solution vectors, so it never
/// changes after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    places: Vec<String>,
    transitions: Vec<String>,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
    // Per transition, sorted by place, weights >= 1.
    pre: Vec<Vec<(PlaceId, u64)>>,
    post: Vec<Vec<(PlaceId, u64)>>,
    initial: Marking,
}

impl PetriNet {
    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl ExactSizeIterator<Item = PlaceId> + '_ {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transitions(&self) -> impl ExactSizeIterator<Item = TransitionId> + '_ {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn place_name(&self, s: PlaceId) -> &str {
        &self.places[s.0]
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[t.0]
    }

    pub fn place(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    pub fn resolve_place(&self, name: &str) -> Result<PlaceId, NetError> {
        self.place(name)
            .ok_or_else(|| NetError::UnknownPlace(name.to_string()))
    }

    pub fn resolve_transition(&self, name: &str) -> Result<TransitionId, NetError> {
        self.transition(name)
            .ok_or_else(|| NetError::UnknownTransition(name.to_string()))
    }

    /// Input arcs of `t` as `(place, F(place, t))`, sorted by place.
    pub fn pre(&self, t: TransitionId) -> &[(PlaceId, u64)] {
        &self.pre[t.0]
    }

    /// Output arcs of `t` as `(place, F(t, place))`, sorted by place.
    pub fn post(&self, t: TransitionId) -> &[(PlaceId, u64)] {
        &self.post[t.0]
    }

    /// F(s, t).
    pub fn pre_weight(&self, s: PlaceId, t: TransitionId) -> u64 {
        arc_lookup(&self.pre[t.0], s)
    }

    /// F(t, s).
    pub fn post_weight(&self, t: TransitionId, s: PlaceId) -> u64 {
        arc_lookup(&self.post[t.0], s)
    }

    /// Net token effect of one firing of `t` on `s`: F(t,s) - F(s,t).
    pub fn effect(&self, s: PlaceId, t: TransitionId) -> i128 {
        i128::from(self.post_weight(t, s)) - i128::from(self.pre_weight(s, t))
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> bool {
        self.pre[t.0].iter().all(|&(s, w)| m.get(s) >= w)
    }

    /// Tokens missing on input places before `t` could fire under `m`.
    pub fn missing_tokens(&self, m: &Marking, t: TransitionId) -> u64 {
        self.pre[t.0]
            .iter()
            .map(|&(s, w)| w.saturating_sub(m.get(s)))
            .sum()
    }

    pub fn enabled(&self, m: &Marking, t: TransitionId) -> Result<bool, NetError> {
        self.check_transition(t)?;
        Ok(self.is_enabled(m, t))
    }

    /// Fires `t` under `m`, returning the successor marking.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        self.check_transition(t)?;
        let mut next = m.clone();
        self.fire_in_place(&mut next, t, 1)?;
        Ok(next)
    }

    /// Fires `t` on `m` in place. `position` is only used for error reporting.
    pub fn fire_in_place(
        &self,
        m: &mut Marking,
        t: TransitionId,
        position: usize,
    ) -> Result<(), NetError> {
        if !self.is_enabled(m, t) {
            return Err(NetError::Disabled {
                position,
                transition: self.transition_name(t).to_string(),
            });
        }
        for &(s, w) in &self.pre[t.0] {
            m.0[s.0] -= w;
        }
        for &(s, w) in &self.post[t.0] {
            m.0[s.0] = m.0[s.0].checked_add(w).ok_or(NetError::TokenOverflow)?;
        }
        Ok(())
    }

    /// Inverse of [`PetriNet::fire_in_place`] for a transition known to have
    /// fired into `m`.
    pub(crate) fn unfire_in_place(&self, m: &mut Marking, t: TransitionId) {
        for &(s, w) in &self.post[t.0] {
            m.0[s.0] -= w;
        }
        for &(s, w) in &self.pre[t.0] {
            m.0[s.0] += w;
        }
    }

    /// Fires `sequence` from `m`. Positions in errors are 1-based.
    pub fn fire_sequence(
        &self,
        m: &Marking,
        sequence: &[TransitionId],
    ) -> Result<Marking, NetError> {
        let mut current = m.clone();
        for (i, &t) in sequence.iter().enumerate() {
            self.check_transition(t)?;
            self.fire_in_place(&mut current, t, i + 1)?;
        }
        Ok(current)
    }

    /// Names of `sequence`, in order.
    pub fn sequence_names(&self, sequence: &[TransitionId]) -> Vec<String> {
        sequence
            .iter()
            .map(|&t| self.transition_name(t).to_string())
            .collect()
    }

    /// Resolves whitespace-separated transition names.
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<TransitionId>, NetError> {
        text.split_whitespace()
            .map(|name| self.resolve_transition(name))
            .collect()
    }

    fn check_transition(&self, t: TransitionId) -> Result<(), NetError> {
        if t.0 < self.transitions.len() {
            Ok(())
        } else {
            Err(NetError::UnknownTransition(format!("#{}", t.0)))
        }
    }
}

fn arc_lookup(arcs: &[(PlaceId, u64)], s: PlaceId) -> u64 {
    arcs.binary_search_by_key(&s, |&(p, _)| p)
        .map(|i| arcs[i].1)
        .unwrap_or(0)
}

/// Incremental constructor for [`PetriNet`]. Duplicate arcs between the same
/// pair of nodes add up.
#[derive(Debug, Default)]
pub struct NetBuilder {
    places: Vec<String>,
    transitions: Vec<String>,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
    pre: Vec<HashMap<PlaceId, u64>>,
    post: Vec<HashMap<PlaceId, u64>>,
    initial: HashMap<PlaceId, u64>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, name: &str) -> Result<PlaceId, NetError> {
        self.check_fresh(name)?;
        let id = PlaceId(self.places.len());
        self.places.push(name.to_string());
        self.place_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn transition(&mut self, name: &str) -> Result<TransitionId, NetError> {
        self.check_fresh(name)?;
        let id = TransitionId(self.transitions.len());
        self.transitions.push(name.to_string());
        self.transition_index.insert(name.to_string(), id);
        self.pre.push(HashMap::new());
        self.post.push(HashMap::new());
        Ok(id)
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    /// Adds `weight` to F(s, t).
    pub fn consume(&mut self, t: TransitionId, s: PlaceId, weight: u64) -> Result<(), NetError> {
        add_weight(&mut self.pre[t.0], s, weight)
    }

    /// Adds `weight` to F(t, s).
    pub fn produce(&mut self, t: TransitionId, s: PlaceId, weight: u64) -> Result<(), NetError> {
        add_weight(&mut self.post[t.0], s, weight)
    }

    /// Adds `tokens` to the initial marking of `s`.
    pub fn mark(&mut self, s: PlaceId, tokens: u64) -> Result<(), NetError> {
        let entry = self.initial.entry(s).or_insert(0);
        *entry = entry.checked_add(tokens).ok_or(NetError::TokenOverflow)?;
        Ok(())
    }

    pub fn build(self) -> Result<PetriNet, NetError> {
        if self.places.is_empty() {
            return Err(NetError::NoPlaces);
        }
        if self.transitions.is_empty() {
            return Err(NetError::NoTransitions);
        }
        let sorted = |arcs: Vec<HashMap<PlaceId, u64>>| -> Vec<Vec<(PlaceId, u64)>> {
            arcs.into_iter()
                .map(|m| {
                    let mut v: Vec<_> = m.into_iter().collect();
                    v.sort_unstable();
                    v
                })
                .collect()
        };
        let mut initial = Marking::zeros(self.places.len());
        for (s, n) in self.initial {
            initial.set(s, n);
        }
        Ok(PetriNet {
            pre: sorted(self.pre),
            post: sorted(self.post),
            places: self.places,
            transitions: self.transitions,
            place_index: self.place_index,
            transition_index: self.transition_index,
            initial,
        })
    }

    fn check_fresh(&self, name: &str) -> Result<(), NetError> {
        if self.place_index.contains_key(name) || self.transition_index.contains_key(name) {
            Err(NetError::DuplicateName(name.to_string()))
        } else {
            Ok(())
        }
    }
}

fn add_weight(arcs: &mut HashMap<PlaceId, u64>, s: PlaceId, weight: u64) -> Result<(), NetError> {
    if weight == 0 {
        return Err(NetError::ZeroWeight);
    }
    let entry = arcs.entry(s).or_insert(0);
    *entry = entry.checked_add(weight).ok_or(NetError::TokenOverflow)?;
    Ok(())
}

/// Token count per place, dense over the net's places. Places not mentioned
/// when building from pairs hold zero tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(Vec<u64>);

impl Marking {
    pub fn zeros(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn from_vec(counts: Vec<u64>) -> Self {
        Marking(counts)
    }

    /// Builds a marking from `(place name, tokens)` pairs; repeated places add up.
    pub fn from_pairs(net: &PetriNet, pairs: &[(&str, u64)]) -> Result<Self, NetError> {
        let mut m = Marking::zeros(net.place_count());
        for &(name, n) in pairs {
            let s = net.resolve_place(name)?;
            m.0[s.0] = m.0[s.0].checked_add(n).ok_or(NetError::TokenOverflow)?;
        }
        Ok(m)
    }

    pub fn get(&self, s: PlaceId) -> u64 {
        self.0[s.0]
    }

    pub fn set(&mut self, s: PlaceId, tokens: u64) {
        self.0[s.0] = tokens;
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self >= other`.
    pub fn covers(&self, other: &Marking) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn display<'a>(&'a self, net: &'a PetriNet) -> MarkingDisplay<'a> {
        MarkingDisplay { marking: self, net }
    }
}

/// Renders a marking as `{s1:2, s3:1}`, omitting empty places.
pub struct MarkingDisplay<'a> {
    marking: &'a Marking,
    net: &'a PetriNet,
}

impl fmt::Display for MarkingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for s in self.net.places() {
            let n = self.marking.get(s);
            if n > 0 {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "{}:{}", self.net.place_name(s), n)?;
            }
        }
        f.write_str("}")
    }
}

/// Count per transition: Parikh images, solution vectors, remainders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionVector(Vec<u64>);

impl TransitionVector {
    pub fn zeros(transitions: usize) -> Self {
        TransitionVector(vec![0; transitions])
    }

    pub fn from_vec(counts: Vec<u64>) -> Self {
        TransitionVector(counts)
    }

    pub fn from_pairs(net: &PetriNet, pairs: &[(&str, u64)]) -> Result<Self, NetError> {
        let mut v = TransitionVector::zeros(net.transition_count());
        for &(name, n) in pairs {
            let t = net.resolve_transition(name)?;
            v.0[t.0] += n;
        }
        Ok(v)
    }

    /// Occurrence count of each transition in `sequence`.
    pub fn parikh(transitions: usize, sequence: &[TransitionId]) -> Self {
        let mut v = TransitionVector::zeros(transitions);
        for t in sequence {
            v.0[t.0] += 1;
        }
        v
    }

    pub fn get(&self, t: TransitionId) -> u64 {
        self.0[t.0]
    }

    pub fn set(&mut self, t: TransitionId, n: u64) {
        self.0[t.0] = n;
    }

    pub fn increment(&mut self, t: TransitionId) {
        self.0[t.0] += 1;
    }

    pub fn decrement(&mut self, t: TransitionId) {
        self.0[t.0] -= 1;
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    pub fn sum(&self) -> u128 {
        self.0.iter().map(|&n| u128::from(n)).sum()
    }

    /// Transitions with a nonzero count, ascending.
    pub fn support(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, _)| TransitionId(i))
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &TransitionVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &TransitionVector) -> TransitionVector {
        TransitionVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some component would go negative.
    pub fn checked_sub(&self, other: &TransitionVector) -> Option<TransitionVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(TransitionVector)
    }

    pub fn display<'a>(&'a self, net: &'a PetriNet) -> TransitionVectorDisplay<'a> {
        TransitionVectorDisplay { vector: self, net }
    }
}

/// Renders a transition vector as `{t:1, u:2}`, omitting zero entries.
pub struct TransitionVectorDisplay<'a> {
    vector: &'a TransitionVector,
    net: &'a PetriNet,
}

impl fmt::Display for TransitionVectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.vector.support().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", self.net.transition_name(t), self.vector.get(t))?;
        }
        f.write_str("}")
    }
}
