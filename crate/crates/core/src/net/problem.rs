use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Marking, NetError, PetriNet, TransitionId, TransitionVector};

/// How the final marking is matched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every place must hold exactly the final count.
    #[default]
    Reach,
    /// Every place must hold at least the final count.
    Cover,
}

/// A net together with an initial marking, a target, and side constraints of
/// the form "transition fires at least k times".
#[derive(Clone, Debug)]
pub struct ReachabilityProblem {
    pub net: PetriNet,
    pub initial: Marking,
    pub target: Marking,
    pub mode: Mode,
    pub required: Vec<(TransitionId, u64)>,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Format(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("negative count {count} for `{name}`")]
    NegativeCount { name: String, count: i64 },
    #[error("required count for `{0}` must be at least 1")]
    ZeroRequirement(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default)]
    initial: Option<BTreeMap<String, i64>>,
    #[serde(default, rename = "final")]
    target: BTreeMap<String, i64>,
    #[serde(default)]
    mode: Mode,
    #[serde(default)]
    require: Vec<RequireEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequireEntry {
    transition: String,
    min: i64,
}

impl ReachabilityProblem {
    /// Builds a problem from named counts. The initial marking defaults to
    /// the net's declared one; unlisted final places mean 0 (reach) or "no
    /// lower bound" (cover), both represented by 0.
    pub fn from_parts(
        net: PetriNet,
        initial: Option<&[(&str, u64)]>,
        target: &[(&str, u64)],
        mode: Mode,
        required: &[(&str, u64)],
    ) -> Result<Self, ProblemError> {
        let initial = match initial {
            Some(pairs) => Marking::from_pairs(&net, pairs)?,
            None => net.initial_marking().clone(),
        };
        let target = Marking::from_pairs(&net, target)?;
        let mut resolved = Vec::with_capacity(required.len());
        for &(name, min) in required {
            if min == 0 {
                return Err(ProblemError::ZeroRequirement(name.to_string()));
            }
            resolved.push((net.resolve_transition(name)?, min));
        }
        Ok(ReachabilityProblem {
            net,
            initial,
            target,
            mode,
            required: resolved,
        })
    }

    /// Whether `m` matches the target under the problem's mode.
    pub fn is_target(&self, m: &Marking) -> bool {
        match self.mode {
            Mode::Reach => m == &self.target,
            Mode::Cover => m.covers(&self.target),
        }
    }

    /// Whether a firing count vector meets every side constraint.
    pub fn meets_requirements(&self, counts: &TransitionVector) -> bool {
        self.required.iter().all(|&(t, k)| counts.get(t) >= k)
    }

    /// Replays `sequence` and checks target and side constraints.
    pub fn check_witness(&self, sequence: &[TransitionId]) -> Result<(), WitnessError> {
        let end = self
            .net
            .fire_sequence(&self.initial, sequence)
            .map_err(WitnessError::Firing)?;
        if !self.is_target(&end) {
            return Err(WitnessError::WrongMarking(end.display(&self.net).to_string()));
        }
        let counts = TransitionVector::parikh(self.net.transition_count(), sequence);
        for &(t, k) in &self.required {
            if counts.get(t) < k {
                return Err(WitnessError::Requirement {
                    transition: self.net.transition_name(t).to_string(),
                    required: k,
                    fired: counts.get(t),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("{0}")]
    Firing(NetError),
    #[error("sequence ends in {0}, which does not match the final marking")]
    WrongMarking(String),
    #[error("`{transition}` fired {fired} times, at least {required} required")]
    Requirement {
        transition: String,
        required: u64,
        fired: u64,
    },
}

/// Parses a TOML problem description against `net`:
///
/// ```toml
/// mode = "reach"          # or "cover"
/// [final]
/// o = 1
/// [[require]]
/// transition = "x2"
/// min = 1
/// ```
///
/// An optional `[initial]` table replaces the net's declared marking.
pub fn parse_problem(text: &str, net: PetriNet) -> Result<ReachabilityProblem, ProblemError> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| ProblemError::Format(e.to_string()))?;
    let counts = |map: &BTreeMap<String, i64>| -> Result<Vec<(String, u64)>, ProblemError> {
        map.iter()
            .map(|(name, &count)| {
                u64::try_from(count)
                    .map(|c| (name.clone(), c))
                    .map_err(|_| ProblemError::NegativeCount {
                        name: name.clone(),
                        count,
                    })
            })
            .collect()
    };
    let initial = file.initial.as_ref().map(counts).transpose()?;
    let target = counts(&file.target)?;
    let required: Vec<(String, u64)> = file
        .require
        .iter()
        .map(|r| {
            u64::try_from(r.min)
                .map(|c| (r.transition.clone(), c))
                .map_err(|_| ProblemError::NegativeCount {
                    name: r.transition.clone(),
                    count: r.min,
                })
        })
        .collect::<Result<_, _>>()?;
    let initial_refs: Option<Vec<(&str, u64)>> = initial
        .as_ref()
        .map(|v| v.iter().map(|(n, c)| (n.as_str(), *c)).collect());
    let target_refs: Vec<(&str, u64)> = target.iter().map(|(n, c)| (n.as_str(), *c)).collect();
    let required_refs: Vec<(&str, u64)> = required.iter().map(|(n, c)| (n.as_str(), *c)).collect();
    ReachabilityProblem::from_parts(
        net,
        initial_refs.as_deref(),
        &target_refs,
        file.mode,
        &required_refs,
    )
}
