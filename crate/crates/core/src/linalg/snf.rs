//! Smith normal form with transformation matrices.
//!
//! Pivots are chosen by minimal absolute value, and each sweep reduces the
//! pivot row and column by Euclidean division against the pivot, which keeps
//! intermediate entries bounded by the pivot instead of letting them grow
//! through repeated combinations.

use super::Matrix;
use crate::Scalar;

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub s: Matrix<T>,
    pub v: Matrix<T>,
    /// Inverse of `v`, maintained alongside it.
    pub v_inv: Matrix<T>,
}

impl<T: Scalar> Smith<T> {
    /// Number of non-zero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.s.nrows().min(self.s.ncols());
        (0..n).take_while(|&i| !self.s[(i, i)].is_zero()).count()
    }

    /// Non-zero diagonal entries, in divisibility order.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rank()).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct Reducer<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: Scalar> Reducer<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c.clone());
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
    }

    /// Smallest non-zero |entry| in the lower-right block starting at `t`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let (r, c) = self.a.shape();
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..r {
            for j in t..c {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let one = ax.is_one();
                    best = Some((i, j, ax));
                    if one {
                        let (i, j, _) = best.unwrap();
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` except for the pivot. Returns false when a
    /// non-zero remainder was left behind (a smaller pivot exists).
    fn sweep(&mut self, t: usize) -> bool {
        let (r, c) = self.a.shape();
        let mut clean = true;
        for i in t + 1..r {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
            self.add_row(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..c {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
            self.add_col(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    /// Smallest non-zero entry in row/column `t` (pivot included).
    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let (r, c) = self.a.shape();
        let mut best = (t, t, self.a[(t, t)].abs());
        for i in t + 1..r {
            let x = &self.a[(i, t)];
            if !x.is_zero() && x.abs() < best.2 {
                best = (i, t, x.abs());
            }
        }
        for j in t + 1..c {
            let x = &self.a[(t, j)];
            if !x.is_zero() && x.abs() < best.2 {
                best = (t, j, x.abs());
            }
        }
        (best.0, best.1)
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let (r, c) = self.a.shape();
        let p = &self.a[(t, t)];
        for i in t + 1..r {
            for j in t + 1..c {
                let x = &self.a[(i, j)];
                if !x.is_zero() && !x.is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn run(&mut self) {
        let (r, c) = self.a.shape();
        let n = r.min(c);
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                if !self.sweep(t) {
                    let (i, j) = self.min_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                match self.non_divisible(t) {
                    Some(i) => {
                        let one = T::one();
                        self.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Computes unimodular `u`, `v` with `u * m * v` diagonal, the diagonal
/// non-negative, the non-zero entries first and each dividing the next.
pub fn smith_normal_form<T: Scalar>(m: &Matrix<T>) -> Smith<T> {
    let (r, c) = m.shape();
    let mut red = Reducer {
        a: m.clone(),
        u: Matrix::identity(r),
        v: Matrix::identity(c),
        v_inv: Matrix::identity(c),
    };
    red.run();
    Smith { u: red.u, s: red.a, v: red.v, v_inv: red.v_inv }
}
