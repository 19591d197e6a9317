use super::AbSheaf;
use crate::abelian::{AbGroup, AbMap, SplitVerdict};
use crate::Scalar;

/// Generating collection of an s-flasque sheaf.
#[derive(Clone, Debug)]
pub struct Collection<T> {
    /// `A^e_x = ker(F_x → lim_{y<x} F_y)` with its inclusion into `F_x`.
    pub kernels: Vec<AbMap<T>>,
    /// A section of `f_x: F_x → lim_{y<x} F_y`.
    pub sections: Vec<AbMap<T>>,
    /// `θ_x: F_x → ∏_{y≤x} A^e_y`, blocks ordered by point index.
    pub theta: Vec<AbMap<T>>,
}

impl<T: Scalar> Collection<T> {
    pub fn group(&self, x: usize) -> &AbGroup<T> {
        self.kernels[x].source()
    }
}

#[derive(Clone, Debug)]
pub enum Flasqueness<T> {
    SFlasque(Collection<T>),
    /// `f_x` at `point` is not a split epimorphism.
    NotSFlasque { point: usize, map: AbMap<T>, verdict: SplitVerdict<T> },
}

impl<T: Scalar> Flasqueness<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Flasqueness::SFlasque(_))
    }
}

impl<T: Scalar> AbSheaf<T> {
    /// `f_x: F_x → lim_{y<x} F_y`.
    pub fn boundary_map(&self, x: usize) -> AbMap<T> {
        let below = self.base().strict_down_set(x);
        let lim = self.sections(&below).expect("strict down-sets are open");
        if below.is_empty() {
            return AbMap::zero(self.stalk(x), &lim.group);
        }
        let legs: Vec<AbMap<T>> = below.iter().map(|&y| self.restriction(y, x).clone()).collect();
        lim.lift_cone(&legs).expect("restrictions form a cone")
    }

    /// Decides s-flasqueness by splitting every `f_x`, ascending by height.
    pub fn is_s_flasque(&self) -> Flasqueness<T> {
        let n = self.base().len();
        let mut kernels: Vec<Option<AbMap<T>>> = vec![None; n];
        let mut sections = Vec::with_capacity(n);
        // κ_x: F_x → A^e_x, a ↦ a − s f a
        let mut kappa: Vec<Option<AbMap<T>>> = vec![None; n];
        for x in self.base().by_height() {
            let f = self.boundary_map(x);
            let section = match f.split_epi() {
                SplitVerdict::Split { section } => section,
                verdict => return Flasqueness::NotSFlasque { point: x, map: f, verdict },
            };
            let (_, incl) = f.kernel();
            let idem = AbMap::identity(self.stalk(x)).sub(&section.compose(&f));
            kappa[x] = Some(incl.lift_through(&idem).expect("a − s f a lies in the kernel"));
            kernels[x] = Some(incl);
            sections.push(section);
        }
        let kernels: Vec<AbMap<T>> = kernels.into_iter().map(|k| k.expect("every point visited")).collect();
        let theta = (0..n)
            .map(|x| {
                let below = self.base().down_set(x);
                let targets: Vec<AbGroup<T>> = below.iter().map(|&y| kernels[y].source().clone()).collect();
                let target = AbGroup::direct_sum(&targets);
                let parts: Vec<usize> = targets.iter().map(|g| g.ngens()).collect();
                let blocks = below.iter().enumerate().map(|(k, &y)| {
                    let m = kappa[y].as_ref().expect("every point visited").compose(self.restriction(y, x));
                    (k, 0, m.matrix().clone())
                });
                AbMap::from_blocks(self.stalk(x), &[self.stalk(x).ngens()], &target, &parts, blocks)
            })
            .collect();
        Flasqueness::SFlasque(Collection { kernels, sections, theta })
    }

    /// Sheaf generated by a collection: `A_x = ∏_{y≤x} A^e_y`, restrictions
    /// the projections.
    pub fn generated_by(base: &crate::poset::FinitePoset, collection: &[AbGroup<T>]) -> AbSheaf<T> {
        use crate::linalg::Matrix;
        assert_eq!(collection.len(), base.len());
        let stalks: Vec<AbGroup<T>> = (0..base.len())
            .map(|x| AbGroup::direct_sum(&base.down_set(x).iter().map(|&y| collection[y].clone()).collect::<Vec<_>>()))
            .collect();
        let covers = base
            .covers()
            .iter()
            .map(|&(x, y)| {
                let small = base.down_set(x);
                let big = base.down_set(y);
                let rows: usize = small.iter().map(|&p| collection[p].ngens()).sum();
                let cols: usize = big.iter().map(|&p| collection[p].ngens()).sum();
                let mut m = Matrix::zeros(rows, cols);
                let mut r0 = 0;
                for &p in &small {
                    let c0: usize = big.iter().take_while(|&&q| q != p).map(|&q| collection[q].ngens()).sum();
                    m.set_block(r0, c0, &Matrix::identity(collection[p].ngens()));
                    r0 += collection[p].ngens();
                }
                ((x, y), AbMap::new_unchecked(stalks[y].clone(), stalks[x].clone(), m))
            })
            .collect();
        AbSheaf::from_covers(base.clone(), stalks, covers)
    }
}
