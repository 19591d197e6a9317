use std::fmt;
use std::sync::Arc;

use crate::linalg::{smith_normal_form, Matrix};
use crate::Scalar;

/// Isomorphism type of a finitely generated abelian group:
/// `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `d₁ | d₂ | … | d_k`, every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupType<T> {
    pub rank: usize,
    pub torsion: Vec<T>,
}

impl<T: Scalar> GroupType<T> {
    pub fn free(rank: usize) -> Self {
        GroupType { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Invariant type of a direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut g = AbGroup::from_type(self);
        g = AbGroup::direct_sum(&[g, AbGroup::from_type(other)]);
        g.invariants()
    }
}

impl<T: fmt::Display> fmt::Display for GroupType<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 0 && self.torsion.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug)]
struct Canonical<T> {
    /// Kept diagonal entries: torsion orders (≥ 2) first, then zeros for free summands.
    factors: Vec<T>,
    /// `k × n`: presentation coordinates to canonical coordinates.
    to_canon: Matrix<T>,
    /// `n × k`: canonical generators written in presentation generators.
    from_canon: Matrix<T>,
}

#[derive(Debug)]
struct Inner<T> {
    ngens: usize,
    relations: Matrix<T>,
    labels: Option<Vec<String>>,
    canon: Canonical<T>,
}

/// Finitely generated abelian group `Z^n / (row span of relations)`.
///
/// Elements are integer vectors over the `n` presentation generators. The
/// canonical form is computed once at construction and used for equality of
/// elements and for the isomorphism type. Cloning is cheap.
#[derive(Clone)]
pub struct AbGroup<T>(Arc<Inner<T>>);

impl<T: Scalar> AbGroup<T> {
    /// Group with `ngens` generators and one relation per row of `relations`.
    pub fn new(ngens: usize, relations: Matrix<T>) -> Self {
        assert_eq!(relations.ncols(), ngens, "relation matrix has the wrong number of columns");
        let snf = smith_normal_form(&relations);
        let diag = snf.diagonal();
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for i in 0..ngens {
            if i < diag.len() {
                if !diag[i].is_one() {
                    kept.push(i);
                    factors.push(diag[i].clone());
                }
            } else {
                kept.push(i);
                factors.push(T::zero());
            }
        }
        let to_canon = Matrix::from_fn(kept.len(), ngens, |r, c| snf.v[(c, kept[r])].clone());
        let from_canon = Matrix::from_fn(ngens, kept.len(), |r, c| snf.v_inv[(kept[c], r)].clone());
        AbGroup(Arc::new(Inner { ngens, relations, labels: None, canon: Canonical { factors, to_canon, from_canon } }))
    }

    /// The cokernel of the presentation matrix (relations as rows).
    pub fn from_presentation(m: &Matrix<T>) -> Self {
        Self::new(m.ncols(), m.clone())
    }

    pub fn free(n: usize) -> Self {
        Self::new(n, Matrix::zeros(0, n))
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/d`, or `Z` when `d == 0`.
    pub fn cyclic(d: T) -> Self {
        Self::new(1, Matrix::from_rows(1, vec![vec![d]]))
    }

    pub fn from_type(t: &GroupType<T>) -> Self {
        let mut groups: Vec<AbGroup<T>> = t.torsion.iter().map(|d| Self::cyclic(d.clone())).collect();
        groups.push(Self::free(t.rank));
        Self::direct_sum(&groups)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.ngens());
        let inner = &self.0;
        AbGroup(Arc::new(Inner {
            ngens: inner.ngens,
            relations: inner.relations.clone(),
            labels: Some(labels),
            canon: Canonical {
                factors: inner.canon.factors.clone(),
                to_canon: inner.canon.to_canon.clone(),
                from_canon: inner.canon.from_canon.clone(),
            },
        }))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &Matrix<T> {
        &self.0.relations
    }

    pub fn rank(&self) -> usize {
        self.0.canon.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<T> {
        self.0.canon.factors.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn invariants(&self) -> GroupType<T> {
        GroupType { rank: self.rank(), torsion: self.torsion() }
    }

    pub fn is_trivial(&self) -> bool {
        self.0.canon.factors.is_empty()
    }

    pub fn is_isomorphic(&self, other: &AbGroup<T>) -> bool {
        self.0.canon.factors == other.0.canon.factors
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<T> {
        if self.rank() > 0 {
            return None;
        }
        Some(self.torsion().into_iter().fold(T::one(), |a, b| a * b))
    }

    /// Orders of the canonical cyclic summands (0 for `Z`).
    pub fn canonical_factors(&self) -> &[T] {
        &self.0.canon.factors
    }

    /// Canonical coordinates of an element, torsion parts reduced into `[0, d)`.
    pub fn canonical(&self, x: &[T]) -> Vec<T> {
        let mut z = self.0.canon.to_canon.mul_vec(x);
        for (zi, d) in z.iter_mut().zip(&self.0.canon.factors) {
            if !d.is_zero() {
                *zi = zi.rem_nonneg(d);
            }
        }
        z
    }

    /// Presentation coordinates of the element with canonical coordinates `z`.
    pub fn from_canonical(&self, z: &[T]) -> Vec<T> {
        self.0.canon.from_canon.mul_vec(z)
    }

    pub fn canonical_generator(&self, i: usize) -> Vec<T> {
        self.0.canon.from_canon.col(i)
    }

    pub(crate) fn to_canonical_matrix(&self) -> &Matrix<T> {
        &self.0.canon.to_canon
    }

    pub fn is_zero_element(&self, x: &[T]) -> bool {
        self.canonical(x).iter().all(|v| v.is_zero())
    }

    pub fn elements_equal(&self, x: &[T], y: &[T]) -> bool {
        let diff: Vec<T> = x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect();
        self.is_zero_element(&diff)
    }

    pub fn zero_element(&self) -> Vec<T> {
        vec![T::zero(); self.ngens()]
    }

    pub fn basis_element(&self, i: usize) -> Vec<T> {
        let mut v = self.zero_element();
        v[i] = T::one();
        v
    }

    /// Direct sum; generators and relations are concatenated block-wise.
    pub fn direct_sum(groups: &[AbGroup<T>]) -> AbGroup<T> {
        let blocks: Vec<&Matrix<T>> = groups.iter().map(|g| g.relations()).collect();
        let n = groups.iter().map(|g| g.ngens()).sum();
        let g = AbGroup::new(n, Matrix::block_diag(&blocks));
        if groups.iter().all(|g| g.labels().is_some()) && !groups.is_empty() {
            let labels = groups.iter().flat_map(|g| g.labels().unwrap().iter().cloned()).collect();
            g.with_labels(labels)
        } else {
            g
        }
    }

    /// Renders an element as a sum of labelled generators when labels exist.
    pub fn format_element(&self, x: &[T]) -> String {
        let mut terms = Vec::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self.labels().map(|l| l[i].clone()).unwrap_or_else(|| format!("g{i}"));
            if c.is_one() {
                terms.push(name);
            } else {
                terms.push(format!("{c}{name}"));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl<T: Scalar> fmt::Display for AbGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

impl<T: fmt::Debug> fmt::Debug for AbGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbGroup({} gens; factors {:?})", self.0.ngens, self.0.canon.factors)
    }
}
