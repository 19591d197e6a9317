//! Finitely presented commutative monoids: word problem, prime spectra,
//! localization, unit and Grothendieck groups, and monoid-level predicates.

mod element;
mod localize;
mod predicates;
mod presentation;
mod primes;
pub mod rewrite;
mod units;

pub use element::{monomials, Element, Monoid, DEFAULT_EFFORT};
pub use localize::Localization;
pub use predicates::{CancelWitness, PcReport, SCancellativeReport, UnitKernelWitness};
pub use presentation::{Presentation, Relation, Word};
pub use primes::Prime;
pub use rewrite::RewriteSystem;
pub use units::UnitGroup;

/// Verdict of a search that is only exhaustive up to a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounded<W> {
    /// No counterexample up to the bound.
    Verified { bound: usize },
    Counterexample(W),
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("negative exponent on non-inverted generator {0}")]
    NegativeExponent(String),
    #[error("completion did not finish within {0} critical pairs")]
    CompletionExceededBound(usize),
    #[error("the monoid is not known to be cancellative")]
    RequiresCancellative,
    #[error("membership search would need degree {0}")]
    MembershipBoundExceeded(usize),
}
