//! Integer scalar abstraction.
//!
//! Every exact computation in the crate runs over a Euclidean ring of
//! integers. [`Scalar`] is blanket-implemented for anything that behaves like
//! one, so the same code serves fixed-width integers (fast, but overflow is the
//! caller's problem) and [`num_bigint::BigInt`] (the crate default).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as matrix entries and group coefficients.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from a small exponent.
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent i64 value")
    }

    /// Non-negative remainder modulo `m` (`m > 0`).
    fn rem_nonneg(&self, m: &Self) -> Self {
        self.mod_floor(m)
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
