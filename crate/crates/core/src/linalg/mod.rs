//! Dense integer matrices, Smith normal form and lattice routines.

mod lattice;
mod matrix;
mod snf;

pub use lattice::{integer_kernel, solve_integer, IntegerSolver, Lattice};
pub use matrix::Matrix;
pub use snf::{smith_normal_form, Smith};
