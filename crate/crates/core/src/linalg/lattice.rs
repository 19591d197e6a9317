//! Integer kernels, integer linear systems and sublattices of `Z^n`.

use super::{smith_normal_form, Matrix, Smith};
use crate::Scalar;

/// Basis (as columns) of `{x ∈ Z^n : m x = 0}`.
pub fn integer_kernel<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let cols: Vec<usize> = (rank..m.ncols()).collect();
    snf.v.select_cols(&cols)
}

/// A solver for `m x = b` over the integers, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSolver<T> {
    snf: Smith<T>,
    rank: usize,
}

impl<T: Scalar> IntegerSolver<T> {
    pub fn new(m: &Matrix<T>) -> Self {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        IntegerSolver { snf, rank }
    }

    /// Some integer solution of `m x = b`, if one exists.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let ub = self.snf.u.mul_vec(b);
        let n = self.snf.v.nrows();
        let mut y = vec![T::zero(); n];
        for (i, val) in ub.iter().enumerate() {
            if i < self.rank {
                let d = &self.snf.s[(i, i)];
                if !val.is_multiple_of(d) {
                    return None;
                }
                y[i] = val.clone() / d.clone();
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }
}

/// Solves `m x = b` over the integers.
pub fn solve_integer<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    IntegerSolver::new(m).solve(b)
}

/// Sublattice of `Z^n` with a basis and coordinate extraction.
#[derive(Clone, Debug)]
pub struct Lattice<T> {
    ambient: usize,
    /// Basis vectors as columns (`ambient × rank`).
    basis: Matrix<T>,
    v: Matrix<T>,
    diag: Vec<T>,
}

impl<T: Scalar> Lattice<T> {
    /// Lattice spanned by the columns of `gens`.
    pub fn from_columns(gens: &Matrix<T>) -> Self {
        let ambient = gens.nrows();
        let snf = smith_normal_form(&gens.transpose());
        let diag = snf.diagonal();
        let basis = Matrix::from_fn(ambient, diag.len(), |i, j| diag[j].clone() * snf.v_inv[(j, i)].clone());
        Lattice { ambient, basis, v: snf.v, diag }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    /// Coordinates of `w` in the basis, or `None` if `w` is not in the lattice.
    pub fn coordinates(&self, w: &[T]) -> Option<Vec<T>> {
        assert_eq!(w.len(), self.ambient);
        let wv = self.v.transpose().mul_vec(w);
        let mut out = Vec::with_capacity(self.diag.len());
        for (i, x) in wv.into_iter().enumerate() {
            if i < self.diag.len() {
                if !x.is_multiple_of(&self.diag[i]) {
                    return None;
                }
                out.push(x / self.diag[i].clone());
            } else if !x.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, w: &[T]) -> bool {
        self.coordinates(w).is_some()
    }
}
