//! Abelian-group-valued sheaves on finite posets, as contravariant functors:
//! for `x ≤ y` a restriction `F_y → F_x`.

mod cohomology;
mod flasque;

use std::collections::HashMap;

use crate::abelian::{check_commutes, finite_limit_unchecked, AbGroup, AbMap, AbelianError, Arrow, Limit};
use crate::linalg::Matrix;
use crate::poset::FinitePoset;
use crate::Scalar;

pub use cohomology::CohomologyModel;
pub use flasque::{Collection, Flasqueness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SheafError {
    #[error("no restriction given for the covering pair ({0}, {1})")]
    MissingRestriction(usize, usize),
    #[error("restriction for ({0}, {1}) has the wrong source or target")]
    WrongShape(usize, usize),
    #[error("({0}, {1}) is not a covering pair")]
    NotACover(usize, usize),
    #[error("restrictions do not compose functorially from {from} to {to}")]
    NotFunctorial { from: usize, to: usize },
    #[error("set is not open")]
    NotOpen,
    #[error("down-sets of {0:?} intersect without a greatest point")]
    NotSeparatedPoset(Vec<usize>),
    #[error("stalk count {0} does not match the poset")]
    StalkCount(usize),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

#[derive(Clone, Debug)]
pub struct AbSheaf<T> {
    base: FinitePoset,
    stalks: Vec<AbGroup<T>>,
    /// Restriction `F_y → F_x` for every comparable pair `x ≤ y`.
    maps: HashMap<(usize, usize), AbMap<T>>,
}

impl<T: Scalar> AbSheaf<T> {
    /// Sheaf from stalks and restrictions on covering pairs `(x, y)`, `x < y`.
    /// Checks well-definedness and functoriality.
    pub fn new(
        base: FinitePoset,
        stalks: Vec<AbGroup<T>>,
        restrictions: impl IntoIterator<Item = ((usize, usize), Matrix<T>)>,
    ) -> Result<Self, SheafError> {
        if stalks.len() != base.len() {
            return Err(SheafError::StalkCount(stalks.len()));
        }
        let mut given = HashMap::new();
        for ((x, y), m) in restrictions {
            if !base.covers().contains(&(x, y)) {
                return Err(SheafError::NotACover(x, y));
            }
            if m.shape() != (stalks[x].ngens(), stalks[y].ngens()) {
                return Err(SheafError::WrongShape(x, y));
            }
            let f = AbMap::new(stalks[y].clone(), stalks[x].clone(), m).map_err(|_| SheafError::WrongShape(x, y))?;
            given.insert((x, y), f);
        }
        for &c in base.covers() {
            if !given.contains_key(&c) {
                return Err(SheafError::MissingRestriction(c.0, c.1));
            }
        }
        let arrows: Vec<Arrow<T>> =
            base.covers().iter().map(|&(x, y)| Arrow { from: y, to: x, map: given[&(x, y)].clone() }).collect();
        check_commutes(base.len(), &arrows).map_err(|e| match e {
            AbelianError::NonCommutingDiagram { from, to } => SheafError::NotFunctorial { from, to },
            other => SheafError::Abelian(other),
        })?;
        Ok(Self::from_covers(base, stalks, given))
    }

    /// Builds the table of all restrictions from already validated covers.
    pub(crate) fn from_covers(
        base: FinitePoset,
        stalks: Vec<AbGroup<T>>,
        covers: HashMap<(usize, usize), AbMap<T>>,
    ) -> Self {
        let mut maps: HashMap<(usize, usize), AbMap<T>> = HashMap::new();
        for y in base.by_height().into_iter().rev() {
            maps.insert((y, y), AbMap::identity(&stalks[y]));
            // descend by height so each composite extends a shorter one
            let mut below = base.strict_down_set(y);
            below.sort_by_key(|&x| std::cmp::Reverse(base.height(x)));
            for x in below {
                let &(_, z) = base
                    .covers()
                    .iter()
                    .find(|&&(a, b)| a == x && base.leq(b, y))
                    .expect("a strict chain starts with a cover");
                let m = covers[&(x, z)].compose(&maps[&(z, y)]);
                maps.insert((x, y), m);
            }
        }
        AbSheaf { base, stalks, maps }
    }

    /// Same stalk `a` everywhere, identity restrictions.
    pub fn constant(base: &FinitePoset, a: &AbGroup<T>) -> Self {
        let stalks = vec![a.clone(); base.len()];
        let covers = base.covers().iter().map(|&c| (c, AbMap::identity(a))).collect();
        Self::from_covers(base.clone(), stalks, covers)
    }

    /// `A` at `p`, zero elsewhere, all restrictions zero.
    pub fn skyscraper(base: &FinitePoset, p: usize, a: &AbGroup<T>) -> Self {
        let zero = AbGroup::zero();
        let stalks: Vec<AbGroup<T>> = (0..base.len()).map(|x| if x == p { a.clone() } else { zero.clone() }).collect();
        let covers = base.covers().iter().map(|&(x, y)| ((x, y), AbMap::zero(&stalks[y], &stalks[x]))).collect();
        Self::from_covers(base.clone(), stalks, covers)
    }

    /// Exterior product on the product poset: stalk `F_p × G_q`.
    pub fn product(&self, other: &AbSheaf<T>) -> AbSheaf<T> {
        let base = self.base.product(&other.base);
        let m = other.base.len();
        let stalks: Vec<AbGroup<T>> = (0..base.len())
            .map(|k| AbGroup::direct_sum(&[self.stalks[k / m].clone(), other.stalks[k % m].clone()]))
            .collect();
        let covers = base
            .covers()
            .iter()
            .map(|&(a, b)| {
                let f = self.restriction(a / m, b / m);
                let g = other.restriction(a % m, b % m);
                let mat = Matrix::block_diag(&[f.matrix(), g.matrix()]);
                ((a, b), AbMap::new_unchecked(stalks[b].clone(), stalks[a].clone(), mat))
            })
            .collect();
        Self::from_covers(base, stalks, covers)
    }

    /// Pointwise direct sum over the same base.
    pub fn direct_sum(&self, other: &AbSheaf<T>) -> AbSheaf<T> {
        assert!(self.base == other.base, "direct sum needs a common base");
        let stalks: Vec<AbGroup<T>> = (0..self.base.len())
            .map(|x| AbGroup::direct_sum(&[self.stalks[x].clone(), other.stalks[x].clone()]))
            .collect();
        let covers = self
            .base
            .covers()
            .iter()
            .map(|&(x, y)| {
                let mat = Matrix::block_diag(&[self.restriction(x, y).matrix(), other.restriction(x, y).matrix()]);
                ((x, y), AbMap::new_unchecked(stalks[y].clone(), stalks[x].clone(), mat))
            })
            .collect();
        Self::from_covers(self.base.clone(), stalks, covers)
    }

    /// Restriction to an open subset, as a sheaf on the induced subposet.
    pub fn restrict_to(&self, open: &[usize]) -> Result<AbSheaf<T>, SheafError> {
        if !self.base.is_open(open) {
            return Err(SheafError::NotOpen);
        }
        let base = self.base.subposet(open);
        let stalks = open.iter().map(|&x| self.stalks[x].clone()).collect();
        let covers = base.covers().iter().map(|&(a, b)| ((a, b), self.restriction(open[a], open[b]).clone())).collect();
        Ok(Self::from_covers(base, stalks, covers))
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn stalk(&self, x: usize) -> &AbGroup<T> {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[AbGroup<T>] {
        &self.stalks
    }

    /// `F_y → F_x` for `x ≤ y`.
    pub fn restriction(&self, x: usize, y: usize) -> &AbMap<T> {
        self.maps.get(&(x, y)).unwrap_or_else(|| panic!("{x} is not below {y}"))
    }

    fn diagram(&self, open: &[usize]) -> (Vec<AbGroup<T>>, Vec<Arrow<T>>) {
        let objects = open.iter().map(|&x| self.stalks[x].clone()).collect();
        let pos = |p: usize| open.iter().position(|&q| q == p);
        let arrows = self
            .base
            .covers()
            .iter()
            .filter_map(|&(x, y)| {
                let (i, j) = (pos(x)?, pos(y)?);
                Some(Arrow { from: j, to: i, map: self.maps[&(x, y)].clone() })
            })
            .collect();
        (objects, arrows)
    }

    /// `F(U) = lim_{x ∈ U} F_x`; projections are in the order of `open`.
    pub fn sections(&self, open: &[usize]) -> Result<Limit<T>, SheafError> {
        if !self.base.is_open(open) {
            return Err(SheafError::NotOpen);
        }
        let (objects, arrows) = self.diagram(open);
        Ok(finite_limit_unchecked(&objects, &arrows))
    }

    pub fn global_sections(&self) -> Limit<T> {
        let all: Vec<usize> = (0..self.base.len()).collect();
        self.sections(&all).expect("the whole space is open")
    }

    /// Restriction of sections `F(V) → F(U)` for opens `U ⊆ V`.
    pub fn restrict_sections(
        &self,
        small: &[usize],
        small_sections: &Limit<T>,
        big: &[usize],
        big_sections: &Limit<T>,
    ) -> Result<AbMap<T>, SheafError> {
        let legs: Vec<AbMap<T>> = small
            .iter()
            .map(|p| {
                let k = big.iter().position(|q| q == p).ok_or(SheafError::NotOpen)?;
                Ok(big_sections.projections[k].clone())
            })
            .collect::<Result<_, SheafError>>()?;
        if legs.is_empty() {
            return Ok(AbMap::zero(&big_sections.group, &small_sections.group));
        }
        Ok(small_sections.lift_cone(&legs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p1() -> FinitePoset {
        let labels = ["g", "m0", "m1"].iter().map(|s| s.to_string()).collect();
        FinitePoset::from_relations(labels, &[(0, 1), (0, 2)]).unwrap()
    }

    /// Units sheaf of the projective line: `Z` at the generic point.
    pub(crate) fn p1_units() -> AbSheaf<i64> {
        let z = AbGroup::free(1);
        let o = AbGroup::zero();
        AbSheaf::new(p1(), vec![z, o.clone(), o], [((0, 1), Matrix::zeros(1, 0)), ((0, 2), Matrix::zeros(1, 0))])
            .unwrap()
    }

    #[test]
    fn single_point_sections() {
        let s = AbSheaf::constant(&FinitePoset::chain(1), &AbGroup::<i64>::cyclic(5));
        assert_eq!(s.sections(&[0]).unwrap().group.to_string(), "Z/5");
    }

    #[test]
    fn constant_on_connected_is_a() {
        let s = AbSheaf::constant(&p1(), &AbGroup::<i64>::free(1));
        assert_eq!(s.global_sections().group.to_string(), "Z^1");
    }

    #[test]
    fn global_units_of_p1_vanish() {
        assert!(p1_units().global_sections().group.is_trivial());
    }

    #[test]
    fn non_open_rejected() {
        assert_eq!(p1_units().sections(&[1]).unwrap_err(), SheafError::NotOpen);
    }

    #[test]
    fn non_functorial_rejected() {
        // diamond with Z everywhere, one side doubled
        let labels = (0..4).map(|i| i.to_string()).collect();
        let d = FinitePoset::from_relations(labels, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let z = AbGroup::<i64>::free(1);
        let one = || Matrix::from_i64(1, 1, &[1]);
        let res = AbSheaf::new(
            d,
            vec![z.clone(); 4],
            [((0, 1), Matrix::from_i64(1, 1, &[2])), ((0, 2), one()), ((1, 3), one()), ((2, 3), one())],
        );
        assert!(matches!(res, Err(SheafError::NotFunctorial { .. })));
    }

    #[test]
    fn skyscraper_off_comparable_points() {
        let s = AbSheaf::skyscraper(&p1(), 1, &AbGroup::<i64>::free(1));
        assert!(s.stalk(0).is_trivial());
        assert!(s.stalk(2).is_trivial());
        assert!(s.restriction(0, 1).is_zero());
        assert_eq!(s.global_sections().group.to_string(), "Z^1");
    }

    #[test]
    fn restriction_of_sections() {
        let s = AbSheaf::constant(&p1(), &AbGroup::<i64>::free(1));
        let all = vec![0, 1, 2];
        let u = vec![0, 1];
        let big = s.sections(&all).unwrap();
        let small = s.sections(&u).unwrap();
        let r = s.restrict_sections(&u, &small, &all, &big).unwrap();
        assert!(r.is_isomorphism());
    }
}
