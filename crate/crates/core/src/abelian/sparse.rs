//! Sparse cochain complexes over cyclic generators, reduced by cancelling
//! invertible entries between generators of equal order before any dense work.

use std::collections::HashMap;

use super::{AbGroup, AbMap, CochainComplex};
use crate::linalg::Matrix;
use crate::Scalar;

#[derive(Clone, Debug, Default)]
struct Sparse<T> {
    rows: Vec<HashMap<usize, T>>,
    cols: Vec<HashMap<usize, T>>,
}

impl<T: Scalar> Sparse<T> {
    fn new(nrows: usize, ncols: usize) -> Self {
        Sparse { rows: vec![HashMap::new(); nrows], cols: vec![HashMap::new(); ncols] }
    }

    fn get(&self, r: usize, c: usize) -> T {
        self.rows[r].get(&c).cloned().unwrap_or_else(T::zero)
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v.clone());
            self.cols[c].insert(r, v);
        }
    }

    fn clear_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
    }

    fn clear_col(&mut self, c: usize) {
        for (r, _) in std::mem::take(&mut self.cols[c]) {
            self.rows[r].remove(&c);
        }
    }
}

/// `C^i = ⊕ Z/orders[i][k]` (order 0 meaning `Z`) with sparse differentials.
#[derive(Clone, Debug)]
pub struct SparseComplex<T> {
    orders: Vec<Vec<T>>,
    diffs: Vec<Sparse<T>>,
}

impl<T: Scalar> SparseComplex<T> {
    pub fn new(orders: Vec<Vec<T>>) -> Self {
        let diffs = (0..orders.len().saturating_sub(1)).map(|i| Sparse::new(orders[i + 1].len(), orders[i].len())).collect();
        SparseComplex { orders, diffs }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Adds `v` to the entry of `d_i` at (`row` of `C^{i+1}`, `col` of `C^i`).
    pub fn add(&mut self, i: usize, row: usize, col: usize, v: T) {
        let cur = self.diffs[i].get(row, col);
        let d = &self.orders[i + 1][row];
        let mut new = cur + v;
        if !d.is_zero() {
            new = new.rem_nonneg(d);
        }
        self.diffs[i].set(row, col, new);
    }

    /// Inverse of `v` as an endomorphism of `Z/order`, if it is one.
    fn unit_inverse(v: &T, order: &T) -> Option<T> {
        if order.is_zero() {
            return v.abs().is_one().then(|| v.clone());
        }
        let e = v.extended_gcd(order);
        e.gcd.is_one().then(|| e.x.rem_nonneg(order))
    }

    /// Cancels an entry that is an isomorphism `Z/a → Z/a`; returns false if
    /// none is left.
    fn cancel_one(&mut self, i: usize, alive: &mut [Vec<bool>]) -> bool {
        let mut best: Option<(usize, usize, usize)> = None;
        for x in 0..self.orders[i].len() {
            if !alive[i][x] {
                continue;
            }
            let a = &self.orders[i][x];
            for (&y, v) in &self.diffs[i].cols[x] {
                if self.orders[i + 1][y] != *a || Self::unit_inverse(v, a).is_none() {
                    continue;
                }
                let cost = (self.diffs[i].rows[y].len() - 1) * (self.diffs[i].cols[x].len() - 1);
                if best.is_none_or(|(_, _, c)| cost < c) {
                    best = Some((x, y, cost));
                    if cost == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(_, _, c)| c == 0) {
                break;
            }
        }
        let Some((x, y, _)) = best else { return false };
        let u = Self::unit_inverse(&self.diffs[i].get(y, x), &self.orders[i][x]).expect("pivot is a unit");
        let col: Vec<(usize, T)> = self.diffs[i].cols[x].iter().filter(|(&k, _)| k != y).map(|(&k, v)| (k, v.clone())).collect();
        let row: Vec<(usize, T)> = self.diffs[i].rows[y].iter().filter(|(&j, _)| j != x).map(|(&j, v)| (j, v.clone())).collect();
        for (k, a) in &col {
            for (j, b) in &row {
                self.add(i, *k, *j, -(a.clone() * u.clone() * b.clone()));
            }
        }
        self.diffs[i].clear_row(y);
        self.diffs[i].clear_col(x);
        if i + 1 < self.diffs.len() {
            self.diffs[i + 1].clear_col(y);
        }
        if i > 0 {
            self.diffs[i - 1].clear_row(x);
        }
        alive[i][x] = false;
        alive[i + 1][y] = false;
        true
    }

    /// Reduces, then computes every `H^i` from the remaining small complex.
    pub fn cohomology_groups(mut self) -> Vec<AbGroup<T>> {
        let mut alive: Vec<Vec<bool>> = self.orders.iter().map(|o| vec![true; o.len()]).collect();
        for i in 0..self.diffs.len() {
            while self.cancel_one(i, &mut alive) {}
        }
        let keep: Vec<Vec<usize>> =
            alive.iter().map(|a| (0..a.len()).filter(|&k| a[k]).collect()).collect();
        let groups: Vec<AbGroup<T>> = keep
            .iter()
            .enumerate()
            .map(|(i, ks)| {
                let n = ks.len();
                let rels: Vec<Vec<T>> = ks
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| !self.orders[i][k].is_zero())
                    .map(|(r, &k)| {
                        let mut row = vec![T::zero(); n];
                        row[r] = self.orders[i][k].clone();
                        row
                    })
                    .collect();
                AbGroup::new(n, Matrix::from_rows(n, rels))
            })
            .collect();
        let maps: Vec<AbMap<T>> = (0..self.diffs.len())
            .map(|i| {
                let m = Matrix::from_fn(keep[i + 1].len(), keep[i].len(), |r, c| self.diffs[i].get(keep[i + 1][r], keep[i][c]));
                AbMap::new_unchecked(groups[i].clone(), groups[i + 1].clone(), m)
            })
            .collect();
        let complex = CochainComplex::new(groups, maps).expect("reduction preserves d ∘ d = 0");
        (0..complex.len()).map(|i| complex.cohomology(i).group).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_of_identity_is_acyclic() {
        let mut c = SparseComplex::<i64>::new(vec![vec![0, 0], vec![0, 0]]);
        c.add(0, 0, 0, 1);
        c.add(0, 1, 1, 1);
        c.add(0, 0, 1, 3);
        assert!(c.cohomology_groups().iter().all(|g| g.is_trivial()));
    }

    #[test]
    fn torsion_survives() {
        // Z --2--> Z --0--> Z/4
        let mut c = SparseComplex::<i64>::new(vec![vec![0], vec![0], vec![4]]);
        c.add(0, 0, 0, 2);
        let h: Vec<String> = c.cohomology_groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(h, vec!["0", "Z/2", "Z/4"]);
    }

    #[test]
    fn torsion_pivots() {
        // Z/4 --3--> Z/4 is an isomorphism, Z/4 --2--> Z/4 is not
        let mut c = SparseComplex::<i64>::new(vec![vec![4], vec![4]]);
        c.add(0, 0, 0, 3);
        assert!(c.cohomology_groups().iter().all(|g| g.is_trivial()));
        let mut c = SparseComplex::<i64>::new(vec![vec![4], vec![4]]);
        c.add(0, 0, 0, 2);
        let h: Vec<String> = c.cohomology_groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(h, vec!["Z/2", "Z/2"]);
    }

    #[test]
    fn circle() {
        // two vertices, two edges, each edge with boundary v1 - v0
        let mut c = SparseComplex::<i64>::new(vec![vec![0, 0], vec![0, 0]]);
        for e in 0..2 {
            c.add(0, e, 0, -1);
            c.add(0, e, 1, 1);
        }
        let h: Vec<String> = c.cohomology_groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(h, vec!["Z^1", "Z^1"]);
    }
}
