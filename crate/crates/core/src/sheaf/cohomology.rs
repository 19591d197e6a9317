use std::collections::HashMap;

use super::{AbSheaf, SheafError};
use crate::abelian::{AbGroup, AbMap, CochainComplex, Cohomology, SparseComplex};
use crate::linalg::Matrix;
use crate::Scalar;

/// Which cochain complex computed a cohomology group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohomologyModel {
    /// Strict chains `x₀ < ⋯ < xₙ`, value in `F_{x₀}`.
    OrderCochain,
    /// Tuples of maximal points, value at the meet.
    ReducedCech,
}

/// Cells per degree: index tuple and the point carrying the stalk.
pub(crate) type Cells = Vec<Vec<(Vec<usize>, usize)>>;

/// Complex whose `p`-cochains are indexed by `cells[p]`, each cell carrying
/// the stalk at its point. Faces drop one index; faces missing from the
/// previous level carry the zero group.
fn assemble<T: Scalar>(
    sheaf: &AbSheaf<T>,
    cells: &[Vec<(Vec<usize>, usize)>],
) -> CochainComplex<T> {
    let groups: Vec<AbGroup<T>> = cells
        .iter()
        .map(|level| AbGroup::direct_sum(&level.iter().map(|(_, x)| sheaf.stalk(*x).clone()).collect::<Vec<_>>()))
        .collect();
    let parts: Vec<Vec<usize>> =
        cells.iter().map(|level| level.iter().map(|(_, x)| sheaf.stalk(*x).ngens()).collect()).collect();
    let mut differentials = Vec::new();
    for p in 0..cells.len().saturating_sub(1) {
        let index: HashMap<&[usize], usize> =
            cells[p].iter().enumerate().map(|(k, (c, _))| (c.as_slice(), k)).collect();
        let mut blocks = Vec::new();
        for (i, (cell, x)) in cells[p + 1].iter().enumerate() {
            for drop in 0..cell.len() {
                let mut face = cell.clone();
                face.remove(drop);
                let Some(&j) = index.get(face.as_slice()) else { continue };
                let y = cells[p][j].1;
                let r = sheaf.restriction(*x, y).matrix();
                let block = if drop % 2 == 0 { r.clone() } else { r.neg() };
                blocks.push((i, j, block));
            }
        }
        differentials.push(AbMap::from_blocks(&groups[p], &parts[p], &groups[p + 1], &parts[p + 1], blocks));
    }
    CochainComplex::new(groups, differentials).expect("alternating face sums square to zero")
}

/// The same complex in canonical coordinates of the stalks, kept sparse.
fn assemble_sparse<T: Scalar>(sheaf: &AbSheaf<T>, cells: &[Vec<(Vec<usize>, usize)>]) -> SparseComplex<T> {
    let factors = |x: usize| sheaf.stalk(x).canonical_factors().to_vec();
    let offsets: Vec<Vec<usize>> = cells
        .iter()
        .map(|level| {
            let mut acc = 0;
            level
                .iter()
                .map(|(_, x)| {
                    let o = acc;
                    acc += factors(*x).len();
                    o
                })
                .collect()
        })
        .collect();
    let orders: Vec<Vec<T>> = cells.iter().map(|level| level.iter().flat_map(|(_, x)| factors(*x)).collect()).collect();
    let mut complex = SparseComplex::new(orders);
    let mut canonical: HashMap<(usize, usize), Matrix<T>> = HashMap::new();
    for p in 0..cells.len().saturating_sub(1) {
        let index: HashMap<&[usize], usize> =
            cells[p].iter().enumerate().map(|(k, (c, _))| (c.as_slice(), k)).collect();
        for (i, (cell, x)) in cells[p + 1].iter().enumerate() {
            for drop in 0..cell.len() {
                let mut face = cell.clone();
                face.remove(drop);
                let Some(&j) = index.get(face.as_slice()) else { continue };
                let y = cells[p][j].1;
                let r = canonical.entry((*x, y)).or_insert_with(|| {
                    let (fx, fy) = (sheaf.stalk(*x), sheaf.stalk(y));
                    let m = sheaf.restriction(*x, y).matrix();
                    fx.to_canonical_matrix().mul(m).mul(&Matrix::from_fn(fy.ngens(), fy.canonical_factors().len(), |a, b| {
                        fy.canonical_generator(b)[a].clone()
                    }))
                });
                for a in 0..r.nrows() {
                    for b in 0..r.ncols() {
                        let v = r[(a, b)].clone();
                        if !v.is_zero() {
                            let v = if drop % 2 == 0 { v } else { -v };
                            complex.add(p, offsets[p + 1][i] + a, offsets[p][j] + b, v);
                        }
                    }
                }
            }
        }
    }
    complex
}

impl<T: Scalar> AbSheaf<T> {
    fn order_cells(&self) -> Cells {
        self.base()
            .strict_chains()
            .into_iter()
            .map(|level| level.into_iter().map(|c| (c.clone(), c[0])).collect())
            .collect()
    }

    /// Normalized complex over strict chains, as dense maps.
    pub fn order_cochain(&self) -> CochainComplex<T> {
        assemble(self, &self.order_cells())
    }

    /// Čech complex of the cover by down-sets of maximal points.
    pub fn reduced_cech(&self) -> Result<CochainComplex<T>, SheafError> {
        Ok(assemble(self, &self.cech_cells()?))
    }

    pub(crate) fn cech_cells(&self) -> Result<Cells, SheafError> {
        let maxima = self.base().maximal();
        let mut cells: Cells = Vec::new();
        let mut level: Vec<Vec<usize>> = (0..maxima.len()).map(|i| vec![i]).collect();
        while !level.is_empty() {
            let mut here = Vec::new();
            let mut next = Vec::new();
            for tuple in level {
                let points: Vec<usize> = tuple.iter().map(|&i| maxima[i]).collect();
                let top = self.base().intersection_top(&points).map_err(|_| SheafError::NotSeparatedPoset(points))?;
                // empty intersections contribute the zero group, and so do all supersets
                let Some(top) = top else { continue };
                for k in tuple.last().map(|&l| l + 1).unwrap_or(0)..maxima.len() {
                    let mut t = tuple.clone();
                    t.push(k);
                    next.push(t);
                }
                here.push((tuple, top));
            }
            cells.push(here);
            level = next;
        }
        while cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        Ok(cells)
    }

    /// Whether every intersection of down-sets of maximal points is empty or
    /// has a greatest point.
    pub fn has_separated_base(&self) -> bool {
        let maxima = self.base().maximal();
        if maxima.len() > 20 {
            return false;
        }
        (1u32..(1 << maxima.len())).all(|mask| {
            let pts: Vec<usize> = (0..maxima.len()).filter(|i| mask & (1 << i) != 0).map(|i| maxima[i]).collect();
            self.base().intersection_top(&pts).is_ok()
        })
    }

    pub fn complex(&self, model: CohomologyModel) -> Result<CochainComplex<T>, SheafError> {
        match model {
            CohomologyModel::OrderCochain => Ok(self.order_cochain()),
            CohomologyModel::ReducedCech => self.reduced_cech(),
        }
    }

    /// `Hⁱ` with cocycles, from the dense complex of the given model.
    pub fn cohomology_full(&self, model: CohomologyModel, i: usize) -> Result<Cohomology<T>, SheafError> {
        Ok(self.complex(model)?.cohomology(i))
    }

    /// `Hⁱ(X, F)` from the order-cochain model.
    pub fn cohomology(&self, i: usize) -> AbGroup<T> {
        let mut all = self.cohomology_groups(CohomologyModel::OrderCochain).expect("order model always applies");
        if i < all.len() {
            all.swap_remove(i)
        } else {
            AbGroup::zero()
        }
    }

    /// `H⁰ … H^dim` in the given model.
    pub fn cohomology_groups(&self, model: CohomologyModel) -> Result<Vec<AbGroup<T>>, SheafError> {
        let cells = match model {
            CohomologyModel::OrderCochain => self.order_cells(),
            CohomologyModel::ReducedCech => self.cech_cells()?,
        };
        let mut groups = assemble_sparse(self, &cells).cohomology_groups();
        groups.resize(self.base().dimension() + 1, AbGroup::zero());
        Ok(groups)
    }
}
