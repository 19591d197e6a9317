//! Picard groups, divisor class groups, s-smoothness and vector bundles.

mod bundle;

use crate::abelian::{AbGroup, AbMap, Limit};
use crate::linalg::Matrix;
use crate::monoid::{Bounded, MonoidError, Presentation};
use crate::scheme::{Scheme, SchemeError};
use crate::sheaf::{AbSheaf, Flasqueness, SheafError};
use crate::Scalar;

pub use bundle::{decompose_bundle, BundleCertificate, BundleCocycle, Decomposition, Transition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("scheme is not connected")]
    NotConnected,
    #[error("not separated: {0}")]
    NotSeparated(String),
    #[error("invalid cocycle: {0}")]
    CocycleInvalid(String),
    #[error("component containing {0} has no generic point")]
    NoGenericPoint(String),
    #[error("cancellativity not verified: {0}")]
    RequiresCancellative(String),
}

/// `Pic(X) = H¹(X, O*_X)`.
pub fn pic<T: Scalar>(x: &Scheme) -> AbGroup<T> {
    unit_cohomology(x, 1)
}

/// `Hⁱ(X, O*_X)`.
pub fn unit_cohomology<T: Scalar>(x: &Scheme, i: usize) -> AbGroup<T> {
    x.units_sheaf::<T>().cohomology(i)
}

/// For each point, the generic point of its connected component.
fn generic_points(x: &Scheme) -> Result<Vec<usize>, InvariantError> {
    let space = x.space();
    let mut generic = vec![0; x.len()];
    for comp in space.components() {
        let least = comp
            .iter()
            .copied()
            .find(|&g| comp.iter().all(|&p| space.leq(g, p)))
            .ok_or_else(|| InvariantError::NoGenericPoint(space.label(comp[0]).to_string()))?;
        for p in comp {
            generic[p] = least;
        }
    }
    Ok(generic)
}

/// `Q = sM*_X / O*_X` with `Q_x = G / im(O*_x)`, `G` the Grothendieck group
/// of the generic stalk of the component of `x`.
pub fn s_quotient_sheaf<T: Scalar>(x: &Scheme) -> Result<AbSheaf<T>, InvariantError> {
    x.is_s_cancellative()?;
    let generic = generic_points(x)?;
    let stalks: Vec<AbGroup<T>> = (0..x.len())
        .map(|p| {
            let g = x.stalk(generic[p]).grothendieck::<T>();
            let image = x.grothendieck_map::<T>(generic[p], p).compose(&x.stalk(p).units::<T>().to_grothendieck);
            AbGroup::new(g.ngens(), g.relations().vstack(&image.matrix().transpose()))
        })
        .collect();
    let covers: Vec<((usize, usize), Matrix<T>)> = x
        .space()
        .covers()
        .iter()
        .map(|&(a, b)| ((a, b), Matrix::identity(stalks[a].ngens())))
        .collect();
    Ok(AbSheaf::new(x.space().clone(), stalks, covers)?)
}

/// A global section of `Q`: a coset representative in `G` at every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<T> {
    pub representatives: Vec<Vec<T>>,
}

/// `sCl(X) = Div(X) / G`, with the comparison against `Pic(X)`.
#[derive(Clone, Debug)]
pub struct ClassGroup<T> {
    pub group: AbGroup<T>,
    pub quotient: AbSheaf<T>,
    pub divisors: Limit<T>,
    /// `⊕ G → Div(X)` over the components.
    pub principal: AbMap<T>,
    /// `Div(X) → sCl(X)`.
    pub projection: AbMap<T>,
    pub pic: AbGroup<T>,
    pub matches_pic: bool,
    /// Search bound behind the cancellativity verdict, for Cartier classes.
    pub bound: Option<usize>,
}

impl<T: Scalar> ClassGroup<T> {
    /// The divisor with the given coordinates in `Div(X)`.
    pub fn divisor(&self, element: &[T]) -> Divisor<T> {
        Divisor { representatives: self.divisors.projections.iter().map(|p| p.apply(element)).collect() }
    }

    pub fn class_of(&self, element: &[T]) -> Vec<T> {
        self.projection.apply(element)
    }
}

/// s-divisor class group of an s-cancellative separated scheme.
pub fn s_class_group<T: Scalar>(x: &Scheme) -> Result<ClassGroup<T>, InvariantError> {
    x.separated_certificate().map_err(|e| match e {
        SchemeError::NotSeparated(s) => InvariantError::NotSeparated(s),
        e => e.into(),
    })?;
    let quotient = s_quotient_sheaf::<T>(x)?;
    let divisors = quotient.global_sections();
    let generic = generic_points(x)?;
    let mut roots: Vec<usize> = generic.clone();
    roots.sort_unstable();
    roots.dedup();
    let gs: Vec<AbGroup<T>> = roots.iter().map(|&g| x.stalk(g).grothendieck::<T>()).collect();
    let total = AbGroup::direct_sum(&gs);
    let parts: Vec<usize> = gs.iter().map(|g| g.ngens()).collect();
    let legs: Vec<AbMap<T>> = (0..x.len())
        .map(|p| {
            let c = roots.iter().position(|&r| r == generic[p]).expect("generic point is a root");
            let blocks = std::iter::once((0, c, Matrix::identity(parts[c])));
            AbMap::from_blocks(&total, &parts, quotient.stalk(p), &[quotient.stalk(p).ngens()], blocks)
        })
        .collect();
    let principal = if legs.is_empty() {
        AbMap::zero(&total, &divisors.group)
    } else {
        divisors.lift_cone(&legs).map_err(SheafError::from)?
    };
    let (group, projection) = principal.cokernel();
    let pic = pic::<T>(x);
    let matches_pic = group.is_isomorphic(&pic);
    Ok(ClassGroup { group, quotient, divisors, principal, projection, pic, matches_pic, bound: None })
}

/// Cartier class group; needs every stalk cancellative up to `bound`.
pub fn cartier_class_group<T: Scalar>(x: &Scheme, bound: usize) -> Result<ClassGroup<T>, InvariantError> {
    match x.is_cancellative(bound)? {
        Bounded::Verified { bound } => {
            let mut cl = s_class_group(x)?;
            cl.bound = Some(bound);
            Ok(cl)
        }
        Bounded::Counterexample((p, w)) => Err(InvariantError::RequiresCancellative(format!(
            "stalk at {} is not cancellative: {w:?}",
            x.space().label(p)
        ))),
        Bounded::Inconclusive { reason } => Err(InvariantError::RequiresCancellative(format!(
            "inconclusive at bound {bound}: {reason}"
        ))),
    }
}

/// s-flasqueness of `sM*_X / O*_X`.
pub fn is_s_smooth<T: Scalar>(x: &Scheme) -> Result<Flasqueness<T>, InvariantError> {
    Ok(s_quotient_sheaf::<T>(x)?.is_s_flasque())
}

#[derive(Clone, Debug)]
pub struct VanishingReport<T> {
    /// `(i, Hⁱ(X, O*_X))` for `2 ≤ i ≤ dim X`.
    pub degrees: Vec<(usize, AbGroup<T>)>,
    /// `None` when X is not s-cancellative.
    pub s_smooth: Option<bool>,
}

impl<T: Scalar> VanishingReport<T> {
    /// An s-smooth scheme with nonzero higher unit cohomology.
    pub fn violation(&self) -> bool {
        self.s_smooth == Some(true) && self.degrees.iter().any(|(_, g)| !g.is_trivial())
    }
}

pub fn vanishing_check<T: Scalar>(x: &Scheme) -> VanishingReport<T> {
    let groups = x.units_sheaf::<T>().cohomology_groups(crate::sheaf::CohomologyModel::OrderCochain).expect("order model");
    let degrees = groups.into_iter().enumerate().skip(2).collect();
    let s_smooth = is_s_smooth::<T>(x).ok().map(|f| f.holds());
    VanishingReport { degrees, s_smooth }
}

fn monomial(p: &Presentation, w: &[i64]) -> String {
    let parts: Vec<String> = w
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            let name = if e < 0 { format!("{}_inv", p.name(i)) } else { p.name(i).to_string() };
            if e.abs() == 1 {
                name
            } else {
                format!("{name}^{}", e.abs())
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Binomial presentation of `k[M]`.
pub fn export_algebra(p: &Presentation) -> String {
    let mut vars: Vec<String> = p.names().to_vec();
    vars.extend(p.inverted_indices().iter().map(|&i| format!("{}_inv", p.name(i))));
    let mut out = format!("ring k[{}]\n", vars.join(", "));
    for r in p.relations() {
        out.push_str(&format!("{} - {}\n", monomial(p, &r.lhs), monomial(p, &r.rhs)));
    }
    for i in p.inverted_indices() {
        out.push_str(&format!("{}*{}_inv - 1\n", p.name(i), p.name(i)));
    }
    out
}
