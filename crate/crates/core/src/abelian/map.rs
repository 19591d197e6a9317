use std::fmt;

use super::{AbGroup, AbelianError};
use crate::linalg::{integer_kernel, IntegerSolver, Lattice, Matrix};
use crate::Scalar;

/// Homomorphism between presented groups. Column `j` of `matrix` is the image
/// of source generator `j`, written in target generators.
#[derive(Clone)]
pub struct AbMap<T> {
    source: AbGroup<T>,
    target: AbGroup<T>,
    matrix: Matrix<T>,
}

/// Outcome of [`AbMap::split_epi`].
#[derive(Clone, Debug)]
pub enum SplitVerdict<T> {
    /// `map ∘ section == id`.
    Split { section: AbMap<T> },
    /// The element (target coordinates) is not in the image.
    NotSurjective { missed: Vec<T> },
    /// Surjective, but no preimage of this canonical generator has the same order.
    NotSplit { generator: Vec<T> },
}

impl<T: Scalar> SplitVerdict<T> {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitVerdict::Split { .. })
    }
}

impl<T: Scalar> AbMap<T> {
    /// Checked constructor: every source relation must map to zero.
    pub fn new(source: AbGroup<T>, target: AbGroup<T>, matrix: Matrix<T>) -> Result<Self, AbelianError> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(AbelianError::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (i, rel) in source.relations().rows_iter().enumerate() {
            if !target.is_zero_element(&matrix.mul_vec(rel)) {
                return Err(AbelianError::IllDefinedMap { relation: i });
            }
        }
        Ok(AbMap { source, target, matrix })
    }

    /// Constructor for matrices that are well defined by construction.
    pub(crate) fn new_unchecked(source: AbGroup<T>, target: AbGroup<T>, matrix: Matrix<T>) -> Self {
        debug_assert_eq!(matrix.shape(), (target.ngens(), source.ngens()));
        AbMap { source, target, matrix }
    }

    pub fn identity(g: &AbGroup<T>) -> Self {
        AbMap::new_unchecked(g.clone(), g.clone(), Matrix::identity(g.ngens()))
    }

    pub fn zero(source: &AbGroup<T>, target: &AbGroup<T>) -> Self {
        AbMap::new_unchecked(source.clone(), target.clone(), Matrix::zeros(target.ngens(), source.ngens()))
    }

    pub fn source(&self) -> &AbGroup<T> {
        &self.source
    }

    pub fn target(&self) -> &AbGroup<T> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbMap<T>) -> AbMap<T> {
        assert_eq!(inner.target.ngens(), self.source.ngens(), "composition shape mismatch");
        AbMap::new_unchecked(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix))
    }

    pub fn negate(&self) -> AbMap<T> {
        AbMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn sub(&self, other: &AbMap<T>) -> AbMap<T> {
        AbMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.ngens()).all(|j| self.target.is_zero_element(&self.matrix.col(j)))
    }

    /// Equality as homomorphisms (not as matrices).
    pub fn equals(&self, other: &AbMap<T>) -> bool {
        self.matrix.shape() == other.matrix.shape()
            && (0..self.source.ngens()).all(|j| self.target.elements_equal(&self.matrix.col(j), &other.matrix.col(j)))
    }

    /// `{x ∈ Z^{n_source} : f(x) = 0 in the target}`; contains the source relations.
    pub fn kernel_lattice(&self) -> Lattice<T> {
        let ns = self.source.ngens();
        let rel_t = self.target.relations().transpose().neg();
        let system = self.matrix.hstack(&rel_t);
        let ker = integer_kernel(&system);
        let rows: Vec<usize> = (0..ns).collect();
        Lattice::from_columns(&ker.select_rows(&rows))
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (AbGroup<T>, AbMap<T>) {
        let lat = self.kernel_lattice();
        let basis = lat.basis().clone();
        let rels: Vec<Vec<T>> = self
            .source
            .relations()
            .rows_iter()
            .map(|r| lat.coordinates(r).expect("source relation outside kernel lattice"))
            .collect();
        let k = AbGroup::new(lat.rank(), Matrix::from_rows(lat.rank(), rels));
        let incl = AbMap::new_unchecked(k.clone(), self.source.clone(), basis);
        (k, incl)
    }

    /// Image, presented as `source / kernel`, with its inclusion into the target.
    pub fn image(&self) -> (AbGroup<T>, AbMap<T>) {
        let lat = self.kernel_lattice();
        let img = AbGroup::new(self.source.ngens(), lat.basis().transpose());
        let incl = AbMap::new_unchecked(img.clone(), self.target.clone(), self.matrix.clone());
        (img, incl)
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (AbGroup<T>, AbMap<T>) {
        let rels = self.target.relations().vstack(&self.matrix.transpose());
        let c = AbGroup::new(self.target.ngens(), rels);
        let proj = AbMap::new_unchecked(self.target.clone(), c.clone(), Matrix::identity(self.target.ngens()));
        (c, proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// A non-zero kernel element in source coordinates, if any.
    pub fn kernel_witness(&self) -> Option<Vec<T>> {
        let (k, incl) = self.kernel();
        if k.is_trivial() {
            return None;
        }
        Some(incl.apply(&k.canonical_generator(0)))
    }

    fn preimage_solver(&self) -> IntegerSolver<T> {
        IntegerSolver::new(&self.matrix.hstack(&self.target.relations().transpose()))
    }

    /// Some `x` with `f(x) = y` in the target, if `y` is in the image.
    pub fn preimage(&self, y: &[T]) -> Option<Vec<T>> {
        let ns = self.source.ngens();
        self.preimage_solver().solve(y).map(|mut x| {
            x.truncate(ns);
            x
        })
    }

    /// Factors `f: A → P` through this injection `self: K → P`.
    pub fn lift_through(&self, f: &AbMap<T>) -> Result<AbMap<T>, AbelianError> {
        assert_eq!(f.target.ngens(), self.target.ngens(), "lift target mismatch");
        let solver = self.preimage_solver();
        let nk = self.source.ngens();
        let mut cols = Vec::with_capacity(f.source.ngens());
        for j in 0..f.source.ngens() {
            let mut z = solver.solve(&f.matrix.col(j)).ok_or(AbelianError::NoLift)?;
            z.truncate(nk);
            cols.push(z);
        }
        AbMap::new(f.source.clone(), self.source.clone(), Matrix::from_cols(nk, cols))
    }

    /// Decides whether this map is a split epimorphism, with a section on success.
    pub fn split_epi(&self) -> SplitVerdict<T> {
        let target = &self.target;
        let factors = target.canonical_factors().to_vec();
        let solver = self.preimage_solver();
        let ns = self.source.ngens();
        let ker = self.kernel_lattice();
        let src_rels_t = self.source.relations().transpose();
        let mut preimages = Vec::with_capacity(factors.len());
        for i in 0..factors.len() {
            let e = target.canonical_generator(i);
            let Some(mut x0) = solver.solve(&e) else {
                return SplitVerdict::NotSurjective { missed: e };
            };
            x0.truncate(ns);
            preimages.push(x0);
        }
        let mut lifts = Vec::with_capacity(factors.len());
        for (i, (d, x0)) in factors.iter().zip(preimages).enumerate() {
            let e = target.canonical_generator(i);
            if d.is_zero() {
                lifts.push(x0);
                continue;
            }
            // need k in ker with d*(x0 + k) in the source relation lattice
            let dk = ker.basis().scale(d);
            let system = dk.hstack(&src_rels_t.neg());
            let rhs: Vec<T> = x0.iter().map(|v| -(v.clone() * d.clone())).collect();
            match IntegerSolver::new(&system).solve(&rhs) {
                Some(sol) => {
                    let kappa = &sol[..ker.rank()];
                    let shift = ker.basis().mul_vec(kappa);
                    lifts.push(x0.iter().zip(shift).map(|(a, b)| a.clone() + b).collect());
                }
                None => return SplitVerdict::NotSplit { generator: e },
            }
        }
        let lift_mat = Matrix::from_cols(ns, lifts);
        let section_matrix = lift_mat.mul(target.to_canonical_matrix());
        let section = AbMap::new(target.clone(), self.source.clone(), section_matrix)
            .expect("constructed section is not well defined");
        debug_assert!(self.compose(&section).equals(&AbMap::identity(target)));
        SplitVerdict::Split { section }
    }

    /// Map between direct sums assembled from blocks; `block(i, j)` maps
    /// `sources[j]` to `targets[i]`, `None` meaning zero.
    pub fn from_blocks(
        source: &AbGroup<T>,
        source_parts: &[usize],
        target: &AbGroup<T>,
        target_parts: &[usize],
        blocks: impl IntoIterator<Item = (usize, usize, Matrix<T>)>,
    ) -> AbMap<T> {
        let offsets = |parts: &[usize]| {
            let mut acc = 0;
            parts
                .iter()
                .map(|p| {
                    let o = acc;
                    acc += p;
                    o
                })
                .collect::<Vec<_>>()
        };
        let so = offsets(source_parts);
        let to = offsets(target_parts);
        let mut m = Matrix::<T>::zeros(target.ngens(), source.ngens());
        for (i, j, b) in blocks {
            for r in 0..b.nrows() {
                for c in 0..b.ncols() {
                    let v = b[(r, c)].clone();
                    if !v.is_zero() {
                        let cur = m[(to[i] + r, so[j] + c)].clone();
                        m[(to[i] + r, so[j] + c)] = cur + v;
                    }
                }
            }
        }
        AbMap::new_unchecked(source.clone(), target.clone(), m)
    }
}

impl<T: fmt::Debug> fmt::Debug for AbMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbMap({:?} -> {:?}; {:?})", self.source, self.target, self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> AbGroup<i64> {
        AbGroup::free(1)
    }

    #[test]
    fn missed_free_factor_after_torsion() {
        // Z --2--> Z/3 + Z^2 hits the torsion part only
        let target = AbGroup::new(3, Matrix::from_rows(3, vec![vec![3, 0, 0]]));
        let f = AbMap::new(z(), target, Matrix::from_cols(3, vec![vec![2, 0, 0]])).unwrap();
        assert!(matches!(f.split_epi(), SplitVerdict::NotSurjective { .. }));
    }

    #[test]
    fn identity_on_z() {
        let id = AbMap::identity(&z());
        assert!(id.kernel().0.is_trivial());
        assert_eq!(id.image().0.invariants(), z().invariants());
        assert!(id.cokernel().0.is_trivial());
    }

    #[test]
    fn doubling_on_z() {
        let f = AbMap::new(z(), z(), Matrix::from_i64(1, 1, &[2])).unwrap();
        assert!(f.kernel().0.is_trivial());
        assert_eq!(f.cokernel().0.to_string(), "Z/2");
        assert!(matches!(f.split_epi(), SplitVerdict::NotSurjective { .. }));
    }

    #[test]
    fn coordinate_projection() {
        let f = AbMap::new(AbGroup::free(2), z(), Matrix::from_i64(1, 2, &[1, 0])).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.to_string(), "Z^1");
        assert!(f.compose(&incl).is_zero());
    }

    #[test]
    fn reduction_mod_two_does_not_split() {
        let z2 = AbGroup::cyclic(2);
        let f = AbMap::new(z(), z2, Matrix::from_i64(1, 1, &[1])).unwrap();
        assert!(f.is_surjective());
        assert!(matches!(f.split_epi(), SplitVerdict::NotSplit { .. }));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let z2 = AbGroup::cyclic(2);
        assert!(AbMap::new(z2, z(), Matrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn torsion_section_exists_when_split() {
        // Z ⊕ Z/2 → Z/2 onto the second factor splits
        let src = AbGroup::direct_sum(&[z(), AbGroup::cyclic(2)]);
        let f = AbMap::new(src, AbGroup::cyclic(2), Matrix::from_i64(1, 2, &[0, 1])).unwrap();
        let SplitVerdict::Split { section } = f.split_epi() else { panic!("expected split") };
        assert!(f.compose(&section).equals(&AbMap::identity(f.target())));
    }

    #[test]
    fn split_needs_kernel_correction() {
        // Z ⊕ Z/2 → Z/2, (a, b) ↦ a + b: the naive preimage (1, 0) has infinite
        // order, (0, 1) works.
        let src = AbGroup::direct_sum(&[z(), AbGroup::cyclic(2)]);
        let f = AbMap::new(src, AbGroup::cyclic(2), Matrix::from_i64(1, 2, &[1, 1])).unwrap();
        assert!(f.split_epi().is_split());
    }
}
