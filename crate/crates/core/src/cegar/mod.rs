//! The refinement loop: solve the state equation, try to realize the
//! solution, and refine with jump or increment constraints when stuck.

mod constraint;
mod dependency;
mod engine;
mod jumps;

pub use constraint::{add_family, transform_jumps, Constraint, ConstraintDisplay, ConstraintFamily};
pub use dependency::{
    build_dependency_graph, estimate_tokens, make_increment_constraint, NoProducer, SccTriple,
};
pub use engine::{cegar_solve, EngineConfig, Optimizations, Outcome, Run, Statistics, Verdict};
pub use jumps::{spawn_jump_children, JumpFamily, SubsetCursor};

use crate::net::{TransitionId, TransitionVector};

/// `(Γ, x, σ, r)`: constraints, their Ω-smallest solution, a fireable prefix
/// and what remains of `x` after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSolution {
    pub constraints: ConstraintFamily,
    pub x: TransitionVector,
    pub sequence: Vec<TransitionId>,
    pub remainder: TransitionVector,
}

impl PartialSolution {
    pub fn is_full(&self) -> bool {
        self.remainder.is_zero()
    }
}
