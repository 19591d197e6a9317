//! Rank-n bundles as 1-cocycles with values in `(O*)ⁿ ⋊ Σₙ`, and their
//! splitting into line bundles.
//!
//! `(d, σ)` stands for the automorphism `e_k ↦ d_{σ(k)} e_{σ(k)}`, so
//! `(d, σ)(d', τ) = (d + σ·d', στ)` with `(σ·d)_{σ(k)} = d_k`.

use std::collections::{HashMap, VecDeque};

use super::InvariantError;
use crate::abelian::{AbGroup, AbMap, Cohomology};
use crate::scheme::{Scheme, SchemeError};
use crate::sheaf::{AbSheaf, CohomologyModel};
use crate::Scalar;

/// Element of `(O*_x)ⁿ ⋊ Σₙ`: unit coordinates per summand and `perm[k] = σ(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<T> {
    pub units: Vec<Vec<T>>,
    pub perm: Vec<usize>,
}

impl<T: Scalar> Transition<T> {
    pub fn identity(group: &AbGroup<T>, n: usize) -> Self {
        Transition { units: vec![group.zero_element(); n], perm: (0..n).collect() }
    }

    pub fn diagonal(units: Vec<Vec<T>>) -> Self {
        let n = units.len();
        Transition { units, perm: (0..n).collect() }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    fn act(perm: &[usize], d: &[Vec<T>]) -> Vec<Vec<T>> {
        let mut out = d.to_vec();
        for (k, &s) in perm.iter().enumerate() {
            out[s] = d[k].clone();
        }
        out
    }

    pub fn mul(&self, other: &Transition<T>) -> Transition<T> {
        let moved = Self::act(&self.perm, &other.units);
        let units = self.units.iter().zip(&moved).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()).collect();
        let perm = other.perm.iter().map(|&k| self.perm[k]).collect();
        Transition { units, perm }
    }

    pub fn inverse(&self) -> Transition<T> {
        let mut inv = vec![0; self.rank()];
        for (k, &s) in self.perm.iter().enumerate() {
            inv[s] = k;
        }
        let neg: Vec<Vec<T>> = self.units.iter().map(|u| u.iter().map(|x| -x.clone()).collect()).collect();
        Transition { units: Self::act(&inv, &neg), perm: inv }
    }

    /// Applies a unit restriction to every summand.
    pub fn restrict(&self, map: &AbMap<T>) -> Transition<T> {
        Transition { units: self.units.iter().map(|u| map.apply(u)).collect(), perm: self.perm.clone() }
    }

    pub fn equals(&self, other: &Transition<T>, group: &AbGroup<T>) -> bool {
        self.perm == other.perm && self.units.iter().zip(&other.units).all(|(a, b)| group.elements_equal(a, b))
    }
}

/// Transition data over the chart cover of a scheme. `charts[i]` is a
/// maximal point and `transitions[(i, j)]` lives on `U_i ∩ U_j`, in the
/// units of the greatest point of that intersection.
#[derive(Clone, Debug)]
pub struct BundleCocycle<'a, T> {
    pub scheme: &'a Scheme,
    pub charts: Vec<usize>,
    pub rank: usize,
    pub transitions: HashMap<(usize, usize), Transition<T>>,
}

/// How to rebuild the input from the line classes: with `a_i = (0, τ_i)·(−e_i, id)`
/// and `R` the diagonal cocycle of the `representatives`, `g_ij = a_i R_ij a_j⁻¹`.
#[derive(Clone, Debug)]
pub struct BundleCertificate<T> {
    /// `τ_i` per chart.
    pub permutations: Vec<Vec<usize>>,
    /// `e_i` per chart: one unit of the chart stalk per summand.
    pub gauge: Vec<Vec<Vec<T>>>,
    /// Per summand, a Čech 1-cocycle (reduced, over pairs of maximal points).
    pub representatives: Vec<Vec<T>>,
    /// Per summand, its class in canonical coordinates, in summand order.
    pub classes: Vec<Vec<T>>,
}

#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    /// `Pic(X)` as the first Čech cohomology group.
    pub pic: AbGroup<T>,
    /// Line classes in canonical coordinates of `pic`, sorted.
    pub classes: Vec<Vec<T>>,
    pub certificate: BundleCertificate<T>,
}

struct Nerve<T> {
    units: AbSheaf<T>,
    /// Position of each chart in `maximal()`.
    slot: Vec<usize>,
    /// Greatest point of `U_i ∩ U_j` (chart positions).
    tops: HashMap<(usize, usize), usize>,
    cells: Vec<(Vec<usize>, usize)>,
    offsets: Vec<usize>,
    h1: Cohomology<T>,
}

impl<T: Scalar> Nerve<T> {
    fn new(x: &Scheme, charts: &[usize]) -> Result<Self, InvariantError> {
        if !x.is_connected() {
            return Err(InvariantError::NotConnected);
        }
        x.separated_certificate().map_err(|e| match e {
            SchemeError::NotSeparated(s) => InvariantError::NotSeparated(s),
            e => e.into(),
        })?;
        let maxima = x.space().maximal();
        let mut sorted = charts.to_vec();
        sorted.sort_unstable();
        if sorted != maxima {
            return Err(InvariantError::CocycleInvalid("charts must list every maximal point once".into()));
        }
        let slot = charts.iter().map(|c| maxima.iter().position(|m| m == c).expect("checked")).collect();
        let mut tops = HashMap::new();
        for (i, &a) in charts.iter().enumerate() {
            for (j, &b) in charts.iter().enumerate() {
                if let Some(t) = x.space().intersection_top(&[a, b]).expect("separated") {
                    tops.insert((i, j), t);
                }
            }
        }
        let units = x.units_sheaf::<T>();
        let cells = units.cech_cells()?.into_iter().nth(1).unwrap_or_default();
        let mut offsets = Vec::with_capacity(cells.len());
        let mut acc = 0;
        for (_, t) in &cells {
            offsets.push(acc);
            acc += units.stalk(*t).ngens();
        }
        let h1 = units.cohomology_full(CohomologyModel::ReducedCech, 1)?;
        Ok(Nerve { units, slot, tops, cells, offsets, h1 })
    }

    fn group(&self, p: usize) -> &AbGroup<T> {
        self.units.stalk(p)
    }

    fn cell_index(&self, i: usize, j: usize) -> Option<usize> {
        let pair = vec![self.slot[i], self.slot[j]];
        self.cells.iter().position(|(c, _)| *c == pair)
    }

    /// Čech cochain from a unit value per ordered chart pair `i < j` in `maximal()` order.
    fn cochain(&self, value: impl Fn(usize, usize) -> Vec<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.h1.cocycles.target().ngens()];
        let chart_of = |s: usize| self.slot.iter().position(|&q| q == s).expect("slot of a chart");
        for (k, (pair, _)) in self.cells.iter().enumerate() {
            for (o, v) in value(chart_of(pair[0]), chart_of(pair[1])).into_iter().enumerate() {
                out[self.offsets[k] + o] = v;
            }
        }
        out
    }

    /// Value of a Čech cochain on the ordered chart pair `(i, j)`.
    fn value(&self, cochain: &[T], i: usize, j: usize) -> Vec<T> {
        let (k, sign) = match self.cell_index(i, j) {
            Some(k) => (k, false),
            None => (self.cell_index(j, i).expect("charts meet"), true),
        };
        let n = self.group(self.cells[k].1).ngens();
        let v = cochain[self.offsets[k]..self.offsets[k] + n].to_vec();
        if sign {
            v.into_iter().map(|x| -x).collect()
        } else {
            v
        }
    }
}

impl<T: Scalar> BundleCocycle<'_, T> {
    fn validate(&self, nerve: &Nerve<T>) -> Result<(), InvariantError> {
        let bad = |s: String| Err(InvariantError::CocycleInvalid(s));
        let m = self.charts.len();
        for ((i, j), g) in &self.transitions {
            if *i >= m || *j >= m {
                return bad(format!("chart index ({i}, {j}) out of range"));
            }
            let Some(&t) = nerve.tops.get(&(*i, *j)) else {
                return bad(format!("charts {i} and {j} do not meet"));
            };
            let mut seen = vec![false; self.rank];
            if g.rank() != self.rank || g.units.len() != self.rank || g.perm.iter().any(|&s| s >= self.rank || std::mem::replace(&mut seen[s], true)) {
                return bad(format!("transition ({i}, {j}) is not in rank {}", self.rank));
            }
            if g.units.iter().any(|u| u.len() != nerve.group(t).ngens()) {
                return bad(format!("transition ({i}, {j}) has units of the wrong shape"));
            }
            if i == j && !g.equals(&Transition::identity(nerve.group(t), self.rank), nerve.group(t)) {
                return bad(format!("transition ({i}, {i}) is not the identity"));
            }
        }
        for i in 0..m {
            for j in 0..m {
                if i != j && nerve.tops.contains_key(&(i, j)) && !self.transitions.contains_key(&(i, j)) {
                    return bad(format!("missing transition ({i}, {j})"));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let pts = [self.charts[i], self.charts[j], self.charts[k]];
                    let Some(t) = self.scheme.space().intersection_top(&pts).expect("separated") else { continue };
                    let at = |a: usize, b: usize| {
                        let top = nerve.tops[&(a, b)];
                        self.transitions[&(a, b)].restrict(nerve.units.restriction(t, top))
                    };
                    if !at(i, k).equals(&at(i, j).mul(&at(j, k)), nerve.group(t)) {
                        return bad(format!("g_{i}{k} ≠ g_{i}{j} g_{j}{k}"));
                    }
                }
                if i < j && nerve.tops.contains_key(&(i, j)) {
                    let t = nerve.tops[&(i, j)];
                    let prod = self.transitions[&(i, j)].mul(&self.transitions[&(j, i)]);
                    if !prod.equals(&Transition::identity(nerve.group(t), self.rank), nerve.group(t)) {
                        return bad(format!("g_{j}{i} is not the inverse of g_{i}{j}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn get(&self, nerve: &Nerve<T>, i: usize, j: usize) -> Transition<T> {
        match self.transitions.get(&(i, j)) {
            Some(g) => g.clone(),
            None => Transition::identity(nerve.group(nerve.tops[&(i, j)]), self.rank),
        }
    }
}

impl<T: Scalar> BundleCertificate<T> {
    /// Checks `g_ij = a_i R_ij a_j⁻¹` on every overlap and that each
    /// representative is a cocycle of the recorded class.
    pub fn verify(&self, cocycle: &BundleCocycle<'_, T>) -> Result<bool, InvariantError> {
        let nerve = Nerve::<T>::new(cocycle.scheme, &cocycle.charts)?;
        for (r, c) in self.representatives.iter().zip(&self.classes) {
            match nerve.h1.class_of(r) {
                Some(h) if nerve.h1.group.canonical(&h) == *c => {}
                _ => return Ok(false),
            }
        }
        let m = cocycle.charts.len();
        let n = cocycle.rank;
        for i in 0..m {
            for j in 0..m {
                let Some(&t) = nerve.tops.get(&(i, j)) else { continue };
                let a = |p: usize| {
                    let chart = cocycle.charts[p];
                    let neg: Vec<Vec<T>> = self.gauge[p].iter().map(|u| u.iter().map(|x| -x.clone()).collect()).collect();
                    let id: Vec<usize> = (0..n).collect();
                    let tau = Transition { units: vec![nerve.group(chart).zero_element(); n], perm: self.permutations[p].clone() };
                    tau.mul(&Transition { units: neg, perm: id }).restrict(nerve.units.restriction(t, chart))
                };
                let r = if i == j {
                    Transition::identity(nerve.group(t), n)
                } else {
                    Transition::diagonal(self.representatives.iter().map(|rep| nerve.value(rep, i, j)).collect())
                };
                let rebuilt = a(i).mul(&r).mul(&a(j).inverse());
                if !rebuilt.equals(&cocycle.get(&nerve, i, j), nerve.group(t)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Splits a rank-n cocycle into n line bundles.
pub fn decompose_bundle<T: Scalar>(cocycle: &BundleCocycle<'_, T>) -> Result<Decomposition<T>, InvariantError> {
    let nerve = Nerve::<T>::new(cocycle.scheme, &cocycle.charts)?;
    cocycle.validate(&nerve)?;
    let m = cocycle.charts.len();
    let n = cocycle.rank;
    let id: Vec<usize> = (0..n).collect();

    // trivialize the permutation part along a BFS tree from chart 0
    let mut tau: Vec<Option<Vec<usize>>> = vec![None; m];
    tau[0] = Some(id.clone());
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..m {
            if tau[j].is_none() && nerve.tops.contains_key(&(i, j)) {
                let ti = tau[i].as_ref().expect("visited");
                let sji = &cocycle.get(&nerve, j, i).perm;
                tau[j] = Some(ti.iter().map(|&k| sji[k]).collect());
                queue.push_back(j);
            }
        }
    }
    let tau: Vec<Vec<usize>> = tau
        .into_iter()
        .map(|t| t.ok_or_else(|| InvariantError::CocycleInvalid("chart nerve is disconnected".into())))
        .collect::<Result<_, _>>()?;

    // h_ij = c_i⁻¹ g_ij c_j with c_i = (0, τ_i)
    let mut diag: HashMap<(usize, usize), Vec<Vec<T>>> = HashMap::new();
    for i in 0..m {
        for j in 0..m {
            let Some(&t) = nerve.tops.get(&(i, j)) else { continue };
            let c = |p: usize| Transition { units: vec![nerve.group(t).zero_element(); n], perm: tau[p].clone() };
            let h = c(i).inverse().mul(&cocycle.get(&nerve, i, j)).mul(&c(j));
            if h.perm != id {
                return Err(InvariantError::CocycleInvalid("permutation part is not a coboundary".into()));
            }
            diag.insert((i, j), h.units);
        }
    }

    let d0 = nerve.units.reduced_cech()?.differential(0).cloned();
    let mut classes = Vec::with_capacity(n);
    let mut representatives = Vec::with_capacity(n);
    let mut gauge: Vec<Vec<Vec<T>>> = vec![Vec::with_capacity(n); m];
    for k in 0..n {
        let beta = nerve.cochain(|i, j| diag[&(i, j)][k].clone());
        let h = nerve.h1.class_of(&beta).ok_or_else(|| InvariantError::CocycleInvalid("diagonal part is not a cocycle".into()))?;
        let rep = nerve.h1.representative(&h);
        let diff: Vec<T> = beta.iter().zip(&rep).map(|(a, b)| a.clone() - b.clone()).collect();
        let e = match &d0 {
            Some(d) => d.preimage(&diff).expect("cohomologous cocycles differ by a coboundary"),
            None => Vec::new(),
        };
        // C⁰ is the sum of chart stalks in maximal() order
        let mut off = 0;
        let maxima = cocycle.scheme.space().maximal();
        let mut per_slot = Vec::with_capacity(maxima.len());
        for &p in &maxima {
            let len = nerve.group(p).ngens();
            per_slot.push(e.get(off..off + len).map(|s| s.to_vec()).unwrap_or_else(|| vec![T::zero(); len]));
            off += len;
        }
        for (p, g) in gauge.iter_mut().enumerate() {
            g.push(per_slot[nerve.slot[p]].clone());
        }
        classes.push(nerve.h1.group.canonical(&h));
        representatives.push(rep);
    }
    let mut sorted = classes.clone();
    sorted.sort();
    Ok(Decomposition {
        pic: nerve.h1.group.clone(),
        classes: sorted,
        certificate: BundleCertificate { permutations: tau, gauge, representatives, classes },
    })
}
