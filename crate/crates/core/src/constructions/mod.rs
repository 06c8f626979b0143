//! Forbidden-pattern generators, the constants planner, the deletion-method
//! pipeline, the layered clique-free construction, and closed-form constant
//! evaluation.

mod constants;
mod deletion;
mod gen;
mod layered;
mod plan;
mod random;

pub use constants::*;
pub use deletion::*;
pub use gen::*;
pub use layered::*;
pub use plan::*;
pub use random::*;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error(transparent)]
    Invariant(#[from] crate::invariants::InvariantError),
    #[error(transparent)]
    Hypergraph(#[from] crate::hypergraph::HypergraphError),
    #[error(transparent)]
    Embed(#[from] crate::embed::EmbedError),
}
