use super::{AbGroup, AbMap, AbelianError};
use crate::Scalar;

/// `C^0 → C^1 → … → C^n`, with `differentials[i]: C^i → C^{i+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex<T> {
    groups: Vec<AbGroup<T>>,
    differentials: Vec<AbMap<T>>,
}

/// `H^i` with the maps needed to move between cocycles and classes.
#[derive(Clone, Debug)]
pub struct Cohomology<T> {
    pub group: AbGroup<T>,
    /// Cocycles `Z^i` and their inclusion into `C^i`.
    pub cocycles: AbMap<T>,
    /// `Z^i → H^i`.
    pub projection: AbMap<T>,
}

impl<T: Scalar> Cohomology<T> {
    /// Class of a cochain; `None` if it is not a cocycle.
    pub fn class_of(&self, cochain: &[T]) -> Option<Vec<T>> {
        let z = self.cocycles.preimage(cochain)?;
        Some(self.projection.apply(&z))
    }

    /// A cocycle representing the class `h` (in generators of `group`).
    pub fn representative(&self, h: &[T]) -> Vec<T> {
        // the projection is the identity on generators of Z^i
        self.cocycles.apply(h)
    }
}

impl<T: Scalar> CochainComplex<T> {
    /// Checks composability and `d ∘ d = 0`.
    pub fn new(groups: Vec<AbGroup<T>>, differentials: Vec<AbMap<T>>) -> Result<Self, AbelianError> {
        if differentials.len() + 1 != groups.len() && !(groups.is_empty() && differentials.is_empty()) {
            return Err(AbelianError::Shape(format!(
                "{} groups need {} differentials, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.source().ngens() != groups[i].ngens() || d.target().ngens() != groups[i + 1].ngens() {
                return Err(AbelianError::Shape(format!("differential {i} has the wrong shape")));
            }
        }
        for i in 1..differentials.len() {
            if !differentials[i].compose(&differentials[i - 1]).is_zero() {
                return Err(AbelianError::NotAComplex(i - 1));
            }
        }
        Ok(CochainComplex { groups, differentials })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, i: usize) -> Option<&AbGroup<T>> {
        self.groups.get(i)
    }

    pub fn differential(&self, i: usize) -> Option<&AbMap<T>> {
        self.differentials.get(i)
    }

    pub fn cohomology(&self, i: usize) -> Cohomology<T> {
        let Some(ci) = self.groups.get(i) else {
            let z = AbGroup::zero();
            let id = AbMap::identity(&z);
            return Cohomology { group: z, cocycles: id.clone(), projection: id };
        };
        let cocycles = match self.differentials.get(i) {
            Some(d) => d.kernel().1,
            None => AbMap::identity(ci),
        };
        let zi = cocycles.source().clone();
        let (group, projection) = match i.checked_sub(1).and_then(|j| self.differentials.get(j)) {
            Some(prev) => {
                let lifted = cocycles.lift_through(prev).expect("image of d lies in the cocycles");
                lifted.cokernel()
            }
            None => {
                let id = AbMap::identity(&zi);
                (zi, id)
            }
        };
        Cohomology { group, cocycles, projection }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn circle_like_complex() {
        // Z^2 → Z^2, (a, b) ↦ (b − a, a − b): H^0 = Z, H^1 = Z
        let c = AbGroup::<i64>::free(2);
        let d = AbMap::new(c.clone(), c.clone(), Matrix::from_i64(2, 2, &[-1, 1, 1, -1])).unwrap();
        let cx = CochainComplex::new(vec![c.clone(), c], vec![d]).unwrap();
        assert_eq!(cx.cohomology(0).group.to_string(), "Z^1");
        let h1 = cx.cohomology(1);
        assert_eq!(h1.group.to_string(), "Z^1");
        let cls = h1.class_of(&[1, 0]).unwrap();
        assert!(!h1.group.is_zero_element(&cls));
        assert!(h1.group.is_zero_element(&h1.class_of(&[1, -1]).unwrap()));
    }

    #[test]
    fn multiplication_by_two() {
        let z = AbGroup::<i64>::free(1);
        let d = AbMap::new(z.clone(), z.clone(), Matrix::from_i64(1, 1, &[2])).unwrap();
        let cx = CochainComplex::new(vec![z.clone(), z], vec![d]).unwrap();
        assert!(cx.cohomology(0).group.is_trivial());
        assert_eq!(cx.cohomology(1).group.to_string(), "Z/2");
        assert!(cx.cohomology(2).group.is_trivial());
    }

    #[test]
    fn rejects_non_complex() {
        let z = AbGroup::<i64>::free(1);
        let id = AbMap::identity(&z);
        let r = CochainComplex::new(vec![z.clone(), z.clone(), z], vec![id.clone(), id]);
        assert!(matches!(r, Err(AbelianError::NotAComplex(0))));
    }
}
