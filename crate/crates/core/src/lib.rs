//! Petri net reachability by refining the state equation.
//!
//! The solver enumerates solutions of the state equation `m + I·x = m'`
//! in Ω order, tries to realize each one as a firing sequence, and when a
//! solution cannot be realized adds constraints that either steer towards
//! a different minimal solution (jump constraints) or force extra token
//! production through T-invariants (increment constraints).

pub mod cegar;
pub mod diagnostics;
pub mod ilp;
pub mod net;
pub mod oracle;
pub mod realize;
