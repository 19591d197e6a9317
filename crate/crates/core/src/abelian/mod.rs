//! Finitely generated abelian groups, homomorphisms, limits and cohomology of
//! cochain complexes.

mod complex;
mod group;
mod limit;
mod map;
mod sparse;

pub use complex::{CochainComplex, Cohomology};
pub use group::{AbGroup, GroupType};
pub(crate) use limit::finite_limit_unchecked;
pub use limit::{check_commutes, finite_limit, Arrow, Limit};
pub use map::{AbMap, SplitVerdict};
pub use sparse::SparseComplex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("map does not send source relation {relation} to zero")]
    IllDefinedMap { relation: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("diagram does not commute between objects {from} and {to}")]
    NonCommutingDiagram { from: usize, to: usize },
    #[error("diagram has a directed cycle")]
    CyclicDiagram,
    #[error("map does not factor through the given injection")]
    NoLift,
    #[error("d∘d is non-zero at degree {0}")]
    NotAComplex(usize),
}
