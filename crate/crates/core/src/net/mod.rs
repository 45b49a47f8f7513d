//! Place/transition nets: the static model, firing rule, incidence matrix,
//! and the readers for net and problem files.

pub mod fixtures;
mod incidence;
mod model;
mod parse;
mod problem;

use thiserror::Error;

pub use incidence::{IncidenceMatrix, DENSE_LIMIT};
pub use model::{
    Marking, MarkingDisplay, NetBuilder, PetriNet, PlaceId, TransitionId, TransitionVector,
    TransitionVectorDisplay,
};
pub use parse::{parse_net, render_net, ParseError};
pub use problem::{parse_problem, Mode, ProblemError, ReachabilityProblem, WitnessError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("duplicate node name `{0}`")]
    DuplicateName(String),
    #[error("arc weight must be at least 1")]
    ZeroWeight,
    #[error("a net needs at least one place")]
    NoPlaces,
    #[error("a net needs at least one transition")]
    NoTransitions,
    #[error("disabled at position {position}: {transition}")]
    Disabled { position: usize, transition: String },
    #[error("token count overflow")]
    TokenOverflow,
}
