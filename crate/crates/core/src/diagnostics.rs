//! Explanations for unreachability built from increment constraints that
//! could not be satisfied.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cegar::SccTriple;
use crate::net::{PetriNet, PlaceId, ReachabilityProblem, TransitionId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// No transition outside the remainder produces on the place set.
    NoProducer,
    /// The state equation became infeasible with the constraint added.
    InfeasibleAfterAdd,
    /// Every realization of the refined solution was pruned.
    PrunedNoProgress,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::NoProducer => "no-producer",
            FailureReason::InfeasibleAfterAdd => "infeasible-after-add",
            FailureReason::PrunedNoProgress => "pruned-no-progress",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedConstraintRecord {
    pub triple: SccTriple,
    /// Tokens missing on the place set, at least 1.
    pub tokens: u64,
    /// The firing prefix that got stuck.
    pub prefix: Vec<TransitionId>,
    /// Support of the remainder at the time of failure.
    pub remainder: BTreeSet<TransitionId>,
    pub reason: FailureReason,
    pub count: u64,
}

/// Accumulates failures during a run.
#[derive(Clone, Debug, Default)]
pub struct Collector {
    records: Vec<FailedConstraintRecord>,
    state_equation_infeasible: bool,
}

impl Collector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[FailedConstraintRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn mark_state_equation_infeasible(&mut self) {
        self.state_equation_infeasible = true;
    }

    pub fn state_equation_infeasible(&self) -> bool {
        self.state_equation_infeasible
    }
}

/// Appends `record`, merging it into an earlier one with the same place set,
/// reason and token count.
pub fn record_failure(collector: &mut Collector, record: FailedConstraintRecord) {
    debug_assert!(record.tokens >= 1 && !record.triple.places.is_empty());
    if let Some(existing) = collector.records.iter_mut().find(|r| {
        r.triple.places == record.triple.places
            && r.reason == record.reason
            && r.tokens == record.tokens
    }) {
        existing.count += record.count.max(1);
        existing.remainder.extend(record.remainder);
        return;
    }
    let mut record = record;
    record.count = record.count.max(1);
    collector.records.push(record);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordView {
    pub places: Vec<String>,
    pub inside: Vec<String>,
    pub dependent: Vec<String>,
    pub tokens: u64,
    pub prefix: Vec<String>,
    pub reason: FailureReason,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub records: Vec<RecordView>,
    pub blocked_places: Vec<String>,
    pub blocked_transitions: Vec<String>,
    pub affected_transitions: Vec<String>,
    pub summary: String,
}

fn names_t(net: &PetriNet, ts: impl IntoIterator<Item = TransitionId>) -> Vec<String> {
    ts.into_iter().map(|t| net.transition_name(t).to_string()).collect()
}

fn names_p(net: &PetriNet, ps: impl IntoIterator<Item = PlaceId>) -> Vec<String> {
    ps.into_iter().map(|s| net.place_name(s).to_string()).collect()
}

/// Turns the collected failures into the blocked and affected regions.
pub fn build_report(problem: &ReachabilityProblem, collector: &Collector) -> DiagnosticsReport {
    let net = &problem.net;
    let mut places: BTreeSet<PlaceId> = BTreeSet::new();
    let mut blocked: BTreeSet<TransitionId> = BTreeSet::new();
    for r in &collector.records {
        places.extend(&r.triple.places);
        blocked.extend(&r.triple.inside);
        blocked.extend(&r.triple.dependent);
    }
    let affected: BTreeSet<TransitionId> = collector
        .records
        .iter()
        .flat_map(|r| r.remainder.iter().copied())
        .filter(|t| !blocked.contains(t))
        .collect();
    let records: Vec<RecordView> = collector
        .records
        .iter()
        .map(|r| RecordView {
            places: names_p(net, r.triple.places.iter().copied()),
            inside: names_t(net, r.triple.inside.iter().copied()),
            dependent: names_t(net, r.triple.dependent.iter().copied()),
            tokens: r.tokens,
            prefix: names_t(net, r.prefix.iter().copied()),
            reason: r.reason,
            count: r.count,
        })
        .collect();
    let summary = if collector.records.is_empty() {
        if collector.state_equation_infeasible {
            "state equation infeasible".to_string()
        } else {
            "no failed constraints recorded".to_string()
        }
    } else {
        let mut s = String::new();
        for (i, r) in records.iter().enumerate() {
            if i > 0 {
                s.push_str("; ");
            }
            let _ = write!(
                s,
                "{{{}}} lacks {} token{} ({})",
                r.places.join(", "),
                r.tokens,
                if r.tokens == 1 { "" } else { "s" },
                r.reason.as_str()
            );
        }
        s
    };
    DiagnosticsReport {
        records,
        blocked_places: names_p(net, places),
        blocked_transitions: names_t(net, blocked),
        affected_transitions: names_t(net, affected),
        summary,
    }
}

impl DiagnosticsReport {
    /// Node and edge list of the whole net with a region tag per node.
    pub fn to_graph(&self, net: &PetriNet) -> String {
        let mut out = String::new();
        for s in net.places() {
            let name = net.place_name(s);
            let region = if self.blocked_places.iter().any(|p| p == name) { "blocked" } else { "none" };
            let _ = writeln!(out, "node {name} place region={region}");
        }
        for t in net.transitions() {
            let name = net.transition_name(t);
            let region = if self.blocked_transitions.iter().any(|x| x == name) {
                "blocked"
            } else if self.affected_transitions.iter().any(|x| x == name) {
                "affected"
            } else {
                "none"
            };
            let _ = writeln!(out, "node {name} transition region={region}");
        }
        for t in net.transitions() {
            for &(s, w) in net.pre(t) {
                let _ = writeln!(out, "edge {} {} weight={w}", net.place_name(s), net.transition_name(t));
            }
            for &(s, w) in net.post(t) {
                let _ = writeln!(out, "edge {} {} weight={w}", net.transition_name(t), net.place_name(s));
            }
        }
        out
    }

    /// Multi-line human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "summary: {}", self.summary);
        for r in &self.records {
            let _ = writeln!(
                out,
                "record: places {{{}}} inside {{{}}} dependent {{{}}} tokens {} reason {} count {} after [{}]",
                r.places.join(", "),
                r.inside.join(", "),
                r.dependent.join(", "),
                r.tokens,
                r.reason.as_str(),
                r.count,
                r.prefix.join(" ")
            );
        }
        let _ = writeln!(out, "blocked places: {}", self.blocked_places.join(" "));
        let _ = writeln!(out, "blocked transitions: {}", self.blocked_transitions.join(" "));
        let _ = writeln!(out, "affected transitions: {}", self.affected_transitions.join(" "));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::NET_C;
    use crate::net::{parse_net, Mode};

    fn record(places: &[usize], tokens: u64, reason: FailureReason) -> FailedConstraintRecord {
        FailedConstraintRecord {
            triple: SccTriple {
                places: places.iter().map(|&i| PlaceId(i)).collect(),
                inside: [TransitionId(2)].into(),
                dependent: BTreeSet::new(),
            },
            tokens,
            prefix: vec![TransitionId(1)],
            remainder: [TransitionId(2), TransitionId(6)].into(),
            reason,
            count: 1,
        }
    }

    #[test]
    fn coalescing() {
        let mut c = Collector::new();
        record_failure(&mut c, record(&[1], 1, FailureReason::NoProducer));
        assert_eq!(c.len(), 1);
        record_failure(&mut c, record(&[1], 1, FailureReason::NoProducer));
        assert_eq!(c.len(), 1);
        assert_eq!(c.records()[0].count, 2);
        record_failure(&mut c, record(&[1], 2, FailureReason::NoProducer));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn regions_are_disjoint() {
        let net = parse_net(NET_C).unwrap();
        let problem = ReachabilityProblem::from_parts(net, None, &[("o", 1)], Mode::Reach, &[]).unwrap();
        let mut c = Collector::new();
        record_failure(&mut c, record(&[1, 2], 1, FailureReason::InfeasibleAfterAdd));
        let report = build_report(&problem, &c);
        assert_eq!(report.blocked_places, ["c1", "c2"]);
        assert_eq!(report.blocked_transitions, ["k1"]);
        assert_eq!(report.affected_transitions, ["x2"]);
        assert!(report.summary.contains("{c1, c2} lacks 1 token"));
        let graph = report.to_graph(&problem.net);
        assert!(graph.contains("node c1 place region=blocked"));
        assert!(graph.contains("node x2 transition region=affected"));
        assert!(graph.contains("edge i u weight=1"));
    }

    #[test]
    fn empty_collector_reports_infeasible_state_equation() {
        let net = parse_net(NET_C).unwrap();
        let problem = ReachabilityProblem::from_parts(net, None, &[("o", 2)], Mode::Reach, &[]).unwrap();
        let mut c = Collector::new();
        c.mark_state_equation_infeasible();
        let report = build_report(&problem, &c);
        assert!(report.records.is_empty());
        assert_eq!(report.summary, "state equation infeasible");
    }
}
