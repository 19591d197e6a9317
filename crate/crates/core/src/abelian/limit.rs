use std::collections::VecDeque;

use super::{AbGroup, AbMap, AbelianError};
use crate::linalg::Matrix;
use crate::Scalar;

/// One arrow of a diagram: `map: objects[from] → objects[to]`.
#[derive(Clone, Debug)]
pub struct Arrow<T> {
    pub from: usize,
    pub to: usize,
    pub map: AbMap<T>,
}

/// Limit cone of a finite diagram.
#[derive(Clone, Debug)]
pub struct Limit<T> {
    pub group: AbGroup<T>,
    /// Inclusion into the product of all objects.
    pub inclusion: AbMap<T>,
    pub product: AbGroup<T>,
    /// Leg of the cone at each object.
    pub projections: Vec<AbMap<T>>,
}

impl<T: Scalar> Limit<T> {
    /// Factors a cone `legs[i]: A → objects[i]` through the limit.
    pub fn lift_cone(&self, legs: &[AbMap<T>]) -> Result<AbMap<T>, AbelianError> {
        assert_eq!(legs.len(), self.projections.len());
        let source = legs.first().map(|l| l.source().clone()).unwrap_or_else(AbGroup::zero);
        let parts: Vec<usize> = self.projections.iter().map(|p| p.target().ngens()).collect();
        let into_product = AbMap::from_blocks(
            &source,
            &[source.ngens()],
            &self.product,
            &parts,
            legs.iter().enumerate().map(|(i, l)| (i, 0, l.matrix().clone())),
        );
        self.inclusion.lift_through(&into_product)
    }
}

/// Checks that all paths between two objects compose to the same map.
pub fn check_commutes<T: Scalar>(n: usize, arrows: &[Arrow<T>]) -> Result<(), AbelianError> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in arrows.iter().enumerate() {
        indeg[a.to] += 1;
        out[a.from].push(k);
    }
    let mut order = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for &k in &out[i] {
            let t = arrows[k].to;
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    if order.len() != n {
        return Err(AbelianError::CyclicDiagram);
    }
    for &start in &order {
        let mut composite: Vec<Option<AbMap<T>>> = vec![None; n];
        for &node in &order {
            let here = if node == start {
                None
            } else {
                match &composite[node] {
                    Some(c) => Some(c.clone()),
                    None => continue,
                }
            };
            for &k in &out[node] {
                let a = &arrows[k];
                let candidate = match &here {
                    Some(c) => a.map.compose(c),
                    None => a.map.clone(),
                };
                match &composite[a.to] {
                    Some(existing) if !existing.equals(&candidate) => {
                        return Err(AbelianError::NonCommutingDiagram { from: start, to: a.to });
                    }
                    Some(_) => {}
                    None => composite[a.to] = Some(candidate),
                }
            }
        }
    }
    Ok(())
}

/// Limit of a commuting diagram, as the kernel of one stacked difference map
/// `(a_i) ↦ (map(a_from) − a_to)` over all arrows.
pub fn finite_limit<T: Scalar>(objects: &[AbGroup<T>], arrows: &[Arrow<T>]) -> Result<Limit<T>, AbelianError> {
    check_commutes(objects.len(), arrows)?;
    Ok(finite_limit_unchecked(objects, arrows))
}

pub(crate) fn finite_limit_unchecked<T: Scalar>(objects: &[AbGroup<T>], arrows: &[Arrow<T>]) -> Limit<T> {
    let product = AbGroup::direct_sum(objects);
    let parts: Vec<usize> = objects.iter().map(|g| g.ngens()).collect();
    let codomain_groups: Vec<AbGroup<T>> = arrows.iter().map(|a| objects[a.to].clone()).collect();
    let codomain = AbGroup::direct_sum(&codomain_groups);
    let cparts: Vec<usize> = codomain_groups.iter().map(|g| g.ngens()).collect();
    let blocks = arrows.iter().enumerate().flat_map(|(k, a)| {
        let id = Matrix::identity(objects[a.to].ngens()).neg();
        [(k, a.from, a.map.matrix().clone()), (k, a.to, id)]
    });
    let diff = AbMap::from_blocks(&product, &parts, &codomain, &cparts, blocks);
    let (group, inclusion) = diff.kernel();
    let mut offset = 0;
    let projections = objects
        .iter()
        .map(|g| {
            let rows: Vec<usize> = (offset..offset + g.ngens()).collect();
            offset += g.ngens();
            AbMap::new_unchecked(group.clone(), g.clone(), inclusion.matrix().select_rows(&rows))
        })
        .collect();
    Limit { group, inclusion, product, projections }
}
