//! Monoid schemes of finite type, stored point by point: a finite poset, a
//! stalk presentation at every point and costalk homomorphisms
//! `O_{X,y} → O_{X,x}` for `x ≤ y`.

mod glue;

use std::collections::HashMap;

use crate::abelian::AbMap;
use crate::linalg::Matrix;
use crate::monoid::{Bounded, CancelWitness, Monoid, MonoidError, Presentation, Word, DEFAULT_EFFORT};
use crate::poset::{FinitePoset, PosetError};
use crate::sheaf::{AbSheaf, SheafError};
use crate::{Int, Scalar};

pub use glue::{projective_space, Overlap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error("inconsistent gluing: {0}")]
    InconsistentGluing(String),
    #[error("not separated: {0}")]
    NotSeparated(String),
    #[error("scheme is not connected")]
    NotConnected,
    #[error("costalk map {y} -> {x} is invalid: {reason}")]
    BadCostalk { x: usize, y: usize, reason: String },
    #[error("costalk maps do not compose from {y} to {x}")]
    NotFunctorial { x: usize, y: usize },
    #[error("unit map {y} -> {x} is not injective")]
    NotSCancellative { x: usize, y: usize, element: Vec<Int> },
}

/// Monoid homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    pub images: Vec<Word>,
}

impl MonoidHom {
    pub fn apply(&self, w: &[i64], target_len: usize) -> Word {
        let mut out = vec![0; target_len];
        for (e, img) in w.iter().zip(&self.images) {
            if *e != 0 {
                for (o, x) in out.iter_mut().zip(img) {
                    *o += e * x;
                }
            }
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonoidHom, target_len: usize) -> MonoidHom {
        MonoidHom { images: inner.images.iter().map(|w| self.apply(w, target_len)).collect() }
    }

    /// Checks relations, inverted generators and signs against the given
    /// source presentation and target monoid.
    pub fn validate(&self, source: &Presentation, target: &Monoid) -> Result<(), String> {
        let tp = target.presentation();
        if self.images.len() != source.ngens() || self.images.iter().any(|w| w.len() != tp.ngens()) {
            return Err("image words have the wrong length".into());
        }
        for w in &self.images {
            if let Some(i) = (0..tp.ngens()).find(|&i| w[i] < 0 && !tp.is_inverted(i)) {
                return Err(format!("negative exponent on non-inverted {}", tp.name(i)));
            }
        }
        let (unit, _) = tp.unit_closure();
        for g in source.inverted_indices() {
            if self.images[g].iter().zip(&unit).any(|(&e, &u)| e != 0 && !u) {
                return Err(format!("inverted {} does not map to a unit", source.name(g)));
            }
        }
        for r in source.relations() {
            let (l, rr) = (self.apply(&r.lhs, tp.ngens()), self.apply(&r.rhs, tp.ngens()));
            if !target.equal(&l, &rr) {
                return Err(format!(
                    "relation {} = {} is not respected",
                    source.format_word(&r.lhs),
                    source.format_word(&r.rhs)
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Scheme {
    space: FinitePoset,
    stalks: Vec<Monoid>,
    /// `O_y → O_x` for every comparable pair `x ≤ y`.
    costalks: HashMap<(usize, usize), MonoidHom>,
}

impl Scheme {
    /// Builds a scheme from stalks and costalk maps on covering pairs,
    /// checking each map and functoriality.
    pub fn from_parts(
        space: FinitePoset,
        stalks: Vec<Presentation>,
        covers: HashMap<(usize, usize), MonoidHom>,
    ) -> Result<Scheme, SchemeError> {
        let monoids = stalks.iter().map(|p| Monoid::new(p, DEFAULT_EFFORT)).collect::<Result<Vec<_>, _>>()?;
        for &(x, y) in space.covers() {
            let h = covers.get(&(x, y)).ok_or_else(|| SchemeError::BadCostalk { x, y, reason: "missing".into() })?;
            h.validate(&stalks[y], &monoids[x]).map_err(|reason| SchemeError::BadCostalk { x, y, reason })?;
        }
        let mut costalks: HashMap<(usize, usize), MonoidHom> = HashMap::new();
        for y in space.by_height().into_iter().rev() {
            let ny = stalks[y].ngens();
            costalks.insert((y, y), MonoidHom { images: (0..ny).map(|i| stalks[y].unit(i)).collect() });
            let mut below = space.strict_down_set(y);
            below.sort_by_key(|&x| std::cmp::Reverse(space.height(x)));
            for x in below {
                let nx = stalks[x].ngens();
                let mut chosen: Option<MonoidHom> = None;
                for &(a, z) in space.covers() {
                    if a != x || !space.leq(z, y) {
                        continue;
                    }
                    let h = covers[&(x, z)].compose(&costalks[&(z, y)], nx);
                    match &chosen {
                        None => chosen = Some(h),
                        Some(c) => {
                            let same = c.images.iter().zip(&h.images).all(|(u, v)| monoids[x].equal(u, v));
                            if !same {
                                return Err(SchemeError::NotFunctorial { x, y });
                            }
                        }
                    }
                }
                costalks.insert((x, y), chosen.expect("x < y has a cover above x"));
            }
        }
        Ok(Scheme { space, stalks: monoids, costalks })
    }

    /// `Spec(M)`: primes, localizations and the canonical maps between them.
    pub fn spec(m: &Presentation) -> Result<Scheme, SchemeError> {
        let primes = m.primes();
        let labels = primes.iter().map(|p| p.display(m).to_string()).collect();
        let leq = primes.iter().map(|p| primes.iter().map(|q| p.is_subset(q)).collect()).collect();
        let space = FinitePoset::new(labels, leq)?;
        let locs: Vec<_> = primes.iter().map(|p| m.localize(p)).collect();
        let covers = space
            .covers()
            .iter()
            .map(|&(x, y)| {
                let images = locs[y].origin.iter().map(|&o| locs[x].gen_images[o].clone()).collect();
                ((x, y), MonoidHom { images })
            })
            .collect();
        Scheme::from_parts(space, locs.into_iter().map(|l| l.presentation).collect(), covers)
    }

    /// Product scheme: product poset, product stalks.
    pub fn product(&self, other: &Scheme) -> Result<Scheme, SchemeError> {
        let space = self.space.product(&other.space);
        let m = other.space.len();
        let stalks: Vec<Presentation> =
            (0..space.len()).map(|k| self.stalk(k / m).product(other.stalk(k % m))).collect();
        let covers = space
            .covers()
            .iter()
            .map(|&(a, b)| {
                let (f, g) = (self.costalk(a / m, b / m), other.costalk(a % m, b % m));
                let (n1, n2) = (self.stalk(a / m).ngens(), other.stalk(a % m).ngens());
                let mut images: Vec<Word> = f
                    .images
                    .iter()
                    .map(|w| {
                        let mut v = w.clone();
                        v.resize(n1 + n2, 0);
                        v
                    })
                    .collect();
                images.extend(g.images.iter().map(|w| {
                    let mut v = vec![0; n1];
                    v.extend_from_slice(w);
                    v
                }));
                ((a, b), MonoidHom { images })
            })
            .collect();
        Scheme::from_parts(space, stalks, covers)
    }

    pub fn space(&self) -> &FinitePoset {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn stalk(&self, x: usize) -> &Presentation {
        self.stalks[x].presentation()
    }

    pub fn stalk_monoid(&self, x: usize) -> &Monoid {
        &self.stalks[x]
    }

    /// `O_{X,y} → O_{X,x}` for `x ≤ y`.
    pub fn costalk(&self, x: usize, y: usize) -> &MonoidHom {
        self.costalks.get(&(x, y)).unwrap_or_else(|| panic!("{x} is not below {y}"))
    }

    /// Affine charts: the maximal points with their stalks.
    pub fn charts(&self) -> Vec<(usize, &Presentation)> {
        self.space.maximal().into_iter().map(|x| (x, self.stalk(x))).collect()
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn is_connected(&self) -> bool {
        self.space.is_connected()
    }

    /// Every intersection of chart down-sets is empty or a single down-set,
    /// listed with its greatest point.
    pub fn separated_certificate(&self) -> Result<Vec<(Vec<usize>, usize)>, SchemeError> {
        let maxima = self.space.maximal();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << maxima.len()) {
            let pts: Vec<usize> = (0..maxima.len()).filter(|i| mask & (1 << i) != 0).map(|i| maxima[i]).collect();
            match self.space.intersection_top(&pts) {
                Ok(Some(top)) => out.push((pts, top)),
                Ok(None) => {}
                Err(()) => {
                    let names: Vec<&str> = pts.iter().map(|&p| self.space.label(p)).collect();
                    return Err(SchemeError::NotSeparated(format!("charts at {} meet in a non-affine set", names.join(", "))));
                }
            }
        }
        Ok(out)
    }

    /// `O*_X` as an abelian sheaf.
    pub fn units_sheaf<T: Scalar>(&self) -> AbSheaf<T> {
        let units: Vec<_> = (0..self.len()).map(|x| self.stalk(x).units::<T>()).collect();
        let restrictions: Vec<((usize, usize), Matrix<T>)> = self
            .space
            .covers()
            .iter()
            .map(|&(x, y)| {
                let h = self.costalk(x, y);
                let cols: Vec<Vec<T>> = units[y]
                    .generators
                    .iter()
                    .map(|&g| units[x].coordinates(&h.images[g]).expect("units map to units"))
                    .collect();
                ((x, y), Matrix::from_cols(units[x].generators.len(), cols))
            })
            .collect();
        AbSheaf::new(self.space.clone(), units.into_iter().map(|u| u.group).collect(), restrictions)
            .expect("unit maps of a scheme form a sheaf")
    }

    /// Induced map of Grothendieck groups `G(O_y) → G(O_x)`.
    pub fn grothendieck_map<T: Scalar>(&self, x: usize, y: usize) -> AbMap<T> {
        let h = self.costalk(x, y);
        let (gx, gy) = (self.stalk(x).grothendieck::<T>(), self.stalk(y).grothendieck::<T>());
        let cols = h.images.iter().map(|w| w.iter().map(|&e| T::from_i64_exact(e)).collect()).collect();
        AbMap::new(gy, gx.clone(), Matrix::from_cols(gx.ngens(), cols)).expect("costalk maps respect relations")
    }

    /// Cancellativity of every stalk, up to the search bound.
    pub fn is_cancellative(&self, bound: usize) -> Result<Bounded<(usize, CancelWitness)>, MonoidError> {
        let mut inconclusive = None;
        for x in 0..self.len() {
            match self.stalk(x).is_cancellative(bound)? {
                Bounded::Verified { .. } => {}
                Bounded::Counterexample(w) => return Ok(Bounded::Counterexample((x, w))),
                Bounded::Inconclusive { reason } => inconclusive = Some(format!("{}: {reason}", self.space.label(x))),
            }
        }
        Ok(match inconclusive {
            Some(reason) => Bounded::Inconclusive { reason },
            None => Bounded::Verified { bound },
        })
    }

    /// Exact: every unit restriction `O*_y → O*_x` is injective.
    pub fn is_s_cancellative(&self) -> Result<(), SchemeError> {
        let sheaf = self.units_sheaf::<Int>();
        for &(x, y) in self.space.covers() {
            if let Some(element) = sheaf.restriction(x, y).kernel_witness() {
                return Err(SchemeError::NotSCancellative { x, y, element });
            }
        }
        Ok(())
    }

    /// Every chart is `N^r × Z^s`.
    pub fn is_smooth(&self) -> Result<bool, MonoidError> {
        for (_, m) in self.charts() {
            if !m.is_smooth_monoid()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_torsion_free(&self, bound: usize) -> Result<bool, MonoidError> {
        for x in 0..self.len() {
            if !self.stalk(x).is_torsion_free(bound)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
