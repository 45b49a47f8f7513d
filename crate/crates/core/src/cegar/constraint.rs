use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::ilp::{LinearSystem, Relation};
use crate::net::{PetriNet, TransitionId, TransitionVector};

/// A linear restriction added on top of the state equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `t < bound`, with `bound >= 1`.
    Jump { transition: TransitionId, bound: u64 },
    /// `Σ coeff · t >= rhs`. Coefficients are sorted by transition and nonzero.
    Increment {
        coeffs: Vec<(TransitionId, i128)>,
        rhs: u128,
    },
}

/// A set of constraints in canonical order; the memoization key of the engine.
pub type ConstraintFamily = BTreeSet<Constraint>;

impl Constraint {
    /// `t < bound`. Returns `None` for `bound == 0`, which no vector satisfies.
    pub fn jump(transition: TransitionId, bound: u64) -> Option<Self> {
        (bound >= 1).then_some(Constraint::Jump { transition, bound })
    }

    pub fn increment(mut coeffs: Vec<(TransitionId, i128)>, rhs: u128) -> Self {
        coeffs.retain(|&(_, c)| c != 0);
        coeffs.sort_unstable_by_key(|&(t, _)| t);
        Constraint::Increment { coeffs, rhs }
    }

    /// `t >= n`.
    pub fn at_least(t: TransitionId, n: u64) -> Self {
        Constraint::increment(vec![(t, 1)], u128::from(n))
    }

    pub fn is_jump(&self) -> bool {
        matches!(self, Constraint::Jump { .. })
    }

    pub fn holds(&self, x: &TransitionVector) -> bool {
        match self {
            Constraint::Jump { transition, bound } => x.get(*transition) < *bound,
            Constraint::Increment { coeffs, rhs } => {
                let lhs: i128 = coeffs
                    .iter()
                    .map(|&(t, c)| c * i128::from(x.get(t)))
                    .sum();
                lhs >= 0 && lhs as u128 >= *rhs
            }
        }
    }

    pub fn add_to(&self, system: &mut LinearSystem, label: impl Into<String>) {
        match self {
            Constraint::Jump { transition, bound } => {
                system.add_strict_upper(transition.0, *bound, label)
            }
            Constraint::Increment { coeffs, rhs } => system.add_row(
                coeffs
                    .iter()
                    .map(|&(t, c)| (t.0, BigInt::from(c)))
                    .collect(),
                Relation::Ge,
                BigInt::from(*rhs),
                label,
            ),
        }
    }

    pub fn display<'a>(&'a self, net: &'a PetriNet) -> ConstraintDisplay<'a> {
        ConstraintDisplay {
            constraint: self,
            net,
        }
    }
}

pub struct ConstraintDisplay<'a> {
    constraint: &'a Constraint,
    net: &'a PetriNet,
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constraint {
            Constraint::Jump { transition, bound } => {
                write!(f, "{} < {}", self.net.transition_name(*transition), bound)
            }
            Constraint::Increment { coeffs, rhs } => {
                for (i, &(t, c)) in coeffs.iter().enumerate() {
                    let name = self.net.transition_name(t);
                    match (i, c) {
                        (0, 1) => write!(f, "{name}")?,
                        (0, -1) => write!(f, "-{name}")?,
                        (0, c) => write!(f, "{c}{name}")?,
                        (_, 1) => write!(f, " + {name}")?,
                        (_, -1) => write!(f, " - {name}")?,
                        (_, c) if c < 0 => write!(f, " - {}{name}", -c)?,
                        (_, c) => write!(f, " + {c}{name}")?,
                    }
                }
                if coeffs.is_empty() {
                    f.write_str("0")?;
                }
                write!(f, " >= {rhs}")
            }
        }
    }
}

/// Appends every constraint of `family` to `system`.
pub fn add_family(system: &mut LinearSystem, family: &ConstraintFamily) {
    for (i, c) in family.iter().enumerate() {
        c.add_to(system, format!("c{i}"));
    }
}

/// Replaces all jump constraints by lower bounds taken from `z`, the
/// Ω-smallest solution of the system with `family`: the result keeps every
/// increment constraint of `family` and adds `t >= z(t)` for each `t` with
/// `z(t) > 0`. Above `z`, both families admit exactly the same solutions.
pub fn transform_jumps(family: &ConstraintFamily, z: &TransitionVector) -> ConstraintFamily {
    family
        .iter()
        .filter(|c| !c.is_jump())
        .cloned()
        .chain(z.support().map(|t| Constraint::at_least(t, z.get(t))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::NET_A;
    use crate::net::parse_net;

    fn ids() -> (TransitionId, TransitionId, TransitionId, TransitionId) {
        (TransitionId(0), TransitionId(1), TransitionId(2), TransitionId(3))
    }

    #[test]
    fn jump_bound_zero_is_rejected() {
        assert!(Constraint::jump(TransitionId(0), 0).is_none());
        assert!(Constraint::jump(TransitionId(0), 1).is_some());
    }

    #[test]
    fn transform_replaces_jumps() {
        let (t, _, u, u2) = ids();
        let family: ConstraintFamily = [Constraint::jump(t, 1).unwrap()].into();
        let z = TransitionVector::from_vec(vec![0, 0, 1, 1]);
        let expected: ConstraintFamily = [Constraint::at_least(u, 1), Constraint::at_least(u2, 1)].into();
        assert_eq!(transform_jumps(&family, &z), expected);
    }

    #[test]
    fn transform_keeps_increments() {
        let (t, t2, u, _) = ids();
        let inc = Constraint::increment(vec![(u, 1), (t2, -1)], 2);
        let family: ConstraintFamily = [inc.clone()].into();
        let z = TransitionVector::from_vec(vec![1, 0, 2, 0]);
        let expected: ConstraintFamily =
            [inc, Constraint::at_least(t, 1), Constraint::at_least(u, 2)].into();
        assert_eq!(transform_jumps(&family, &z), expected);
    }

    #[test]
    fn transform_of_jumps_at_zero_is_empty() {
        let (t, t2, _, _) = ids();
        let family: ConstraintFamily =
            [Constraint::jump(t, 2).unwrap(), Constraint::jump(t2, 1).unwrap()].into();
        assert!(transform_jumps(&family, &TransitionVector::zeros(4)).is_empty());
    }

    #[test]
    fn display_and_holds() {
        let net = parse_net(NET_A).unwrap();
        let (t, t2, u, _) = ids();
        let c = Constraint::increment(vec![(u, 2), (t, -1), (t2, 1)], 3);
        assert_eq!(c.display(&net).to_string(), "-t + t' + 2u >= 3");
        assert!(c.holds(&TransitionVector::from_vec(vec![0, 1, 1, 0])));
        assert!(!c.holds(&TransitionVector::from_vec(vec![1, 1, 1, 0])));
        let j = Constraint::jump(u, 2).unwrap();
        assert_eq!(j.display(&net).to_string(), "u < 2");
        assert!(j.holds(&TransitionVector::from_vec(vec![0, 0, 1, 0])));
    }
}
