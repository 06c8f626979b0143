//! Desk-scale library for weak colorings of r-uniform hypergraphs that
//! exclude fixed subhypergraphs: invariants (density, edge automorphisms),
//! copy search and packing, exact alpha/chi solvers, constructive coloring
//! procedures, random constructions with certification, and hypertree
//! exclusion coloring.
//!
//! Everything is deterministic given its seed; randomized procedures derive
//! all internal streams from one 64-bit seed via counter-based splitting
//! (see [`seeding`]).

pub mod constructions;
pub mod embed;
pub mod hypergraph;
pub mod invariants;
pub mod seeding;
pub mod solvers;
pub mod treecolor;

pub use hypergraph::{Coloring, Edge, Hypergraph, HypergraphError, Vertex, VertexSet};
pub use invariants::{
    are_isomorphic, canonical_code, compute_rho, edge_automorphisms, family_profile, AutReport,
    DensityReport, FamilyProfile, InvariantError, Rat,
};
