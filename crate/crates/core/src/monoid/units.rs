//! Unit groups and Grothendieck groups.
//!
//! A generator is a unit exactly when it lies in the closure of the inverted
//! generators under "if one side of a relation consists of units, so does the
//! other". The indicator of that set is a `{0,1}`-character, so every unit is
//! a word in those generators and every derivation between two such words
//! only passes through relations supported on them. Hence `M*` is the group
//! on those generators modulo the relations supported on them.

use super::{Presentation, Word};
use crate::abelian::{AbGroup, AbMap};
use crate::linalg::Matrix;
use crate::Scalar;

/// `M*` with, for every generator of the answer, an inverse word.
#[derive(Clone, Debug)]
pub struct UnitGroup<T> {
    pub group: AbGroup<T>,
    /// Presentation indices of the unit generators; group generator `k` is
    /// `generators[k]`.
    pub generators: Vec<usize>,
    /// `inverses[k]` multiplies with generator `generators[k]` to `1`.
    pub inverses: Vec<Word>,
    /// `M* → G`.
    pub to_grothendieck: AbMap<T>,
}

impl<T: Scalar> UnitGroup<T> {
    /// Coordinates in `group` of a word supported on unit generators.
    pub fn coordinates(&self, w: &[i64]) -> Option<Vec<T>> {
        let mut out = vec![T::zero(); self.generators.len()];
        for (i, &e) in w.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let k = self.generators.iter().position(|&g| g == i)?;
            out[k] = T::from_i64_exact(e);
        }
        Some(out)
    }
}

fn support_in(w: &[i64], set: &[bool]) -> bool {
    w.iter().zip(set).all(|(&e, &s)| e == 0 || s)
}

impl Presentation {
    /// Unit generators as a mask, with an inverse word for each.
    pub fn unit_closure(&self) -> (Vec<bool>, Vec<Option<Word>>) {
        let n = self.ngens();
        let mut unit = self.inverted().to_vec();
        let mut inv: Vec<Option<Word>> = (0..n)
            .map(|i| {
                self.is_inverted(i).then(|| {
                    let mut w = vec![0; n];
                    w[i] = -1;
                    w
                })
            })
            .collect();
        loop {
            let mut changed = false;
            for r in self.relations() {
                for (known, other) in [(&r.rhs, &r.lhs), (&r.lhs, &r.rhs)] {
                    if !support_in(known, &unit) || support_in(other, &unit) {
                        continue;
                    }
                    // other * known^{-1} = 1
                    let mut known_inv = vec![0; n];
                    for (h, &e) in known.iter().enumerate() {
                        if e != 0 {
                            let ih = inv[h].as_ref().expect("unit has an inverse");
                            for j in 0..n {
                                known_inv[j] += e * ih[j];
                            }
                        }
                    }
                    for g in 0..n {
                        if other[g] != 0 && !unit[g] {
                            let mut w = known_inv.clone();
                            for j in 0..n {
                                w[j] += other[j];
                            }
                            w[g] -= 1;
                            inv[g] = Some(w);
                        }
                    }
                    for g in 0..n {
                        if other[g] != 0 {
                            unit[g] = true;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                return (unit, inv);
            }
        }
    }

    /// Rewrites negative exponents on non-inverted unit generators using
    /// their inverse words; `None` if such a generator is not a unit.
    pub fn unit_normal_word(&self, w: &[i64]) -> Option<Word> {
        let mut out = w.to_vec();
        if (0..self.ngens()).all(|g| out[g] >= 0 || self.is_inverted(g)) {
            return Some(out);
        }
        let (unit, inv) = self.unit_closure();
        for g in 0..self.ngens() {
            if out[g] < 0 && !self.is_inverted(g) {
                if !unit[g] {
                    return None;
                }
                let k = -out[g];
                out[g] = 0;
                for (o, x) in out.iter_mut().zip(inv[g].as_ref().expect("unit has an inverse")) {
                    *o += k * x;
                }
            }
        }
        Some(out)
    }

    /// Exact unit group `M*`.
    pub fn units<T: Scalar>(&self) -> UnitGroup<T> {
        let (unit, inv) = self.unit_closure();
        let generators: Vec<usize> = (0..self.ngens()).filter(|&i| unit[i]).collect();
        let rows: Vec<Vec<T>> = self
            .relations()
            .iter()
            .filter(|r| support_in(&r.lhs, &unit) && support_in(&r.rhs, &unit))
            .map(|r| generators.iter().map(|&g| T::from_i64_exact(r.lhs[g] - r.rhs[g])).collect())
            .collect();
        let group = AbGroup::new(generators.len(), Matrix::from_rows(generators.len(), rows))
            .with_labels(generators.iter().map(|&g| self.name(g).to_string()).collect());
        let g = self.grothendieck::<T>();
        let incl = Matrix::from_fn(self.ngens(), generators.len(), |i, k| {
            if generators[k] == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let to_grothendieck = AbMap::new(group.clone(), g, incl).expect("unit relations hold in G");
        let inverses = generators.iter().map(|&g| inv[g].clone().expect("unit has an inverse")).collect();
        UnitGroup { group, generators, inverses, to_grothendieck }
    }

    /// Grothendieck group: `Z^gens` modulo `lhs − rhs` of every relation.
    pub fn grothendieck<T: Scalar>(&self) -> AbGroup<T> {
        let n = self.ngens();
        let rows: Vec<Vec<T>> =
            self.relations().iter().map(|r| (0..n).map(|i| T::from_i64_exact(r.lhs[i] - r.rhs[i])).collect()).collect();
        AbGroup::new(n, Matrix::from_rows(n, rows)).with_labels(self.names().to_vec())
    }

    /// Image of a word in the Grothendieck group.
    pub fn grothendieck_class<T: Scalar>(&self, w: &[i64]) -> Vec<T> {
        w.iter().map(|&e| T::from_i64_exact(e)).collect()
    }
}
