//! Monoid schemes: spectra of finitely presented commutative monoids,
//! sheaves of abelian groups on finite posets, and their cohomological
//! invariants.

#![allow(clippy::needless_range_loop, clippy::result_unit_err)]

pub mod abelian;
pub mod invariants;
pub mod linalg;
pub mod monoid;
pub mod poset;
pub mod scheme;
pub mod sheaf;
mod scalar;

pub use scalar::Scalar;

/// Default integer type.
pub type Int = num_bigint::BigInt;
pub type Group = abelian::AbGroup<Int>;
pub type GroupMap = abelian::AbMap<Int>;
pub type IntMatrix = linalg::Matrix<Int>;
