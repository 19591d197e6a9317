//! Finite posets. Throughout, `x ≤ y` means `x` is more generic than `y`
//! (in a spectrum, `x ⊆ y` as prime ideals); open sets are down-sets.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("order relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("order relation is not antisymmetric between {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("order relation is not transitive through {0}, {1}, {2}")]
    NotTransitive(usize, usize, usize),
    #[error("point index out of range")]
    OutOfRange,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    covers: Vec<(usize, usize)>,
    heights: Vec<usize>,
}

impl FinitePoset {
    /// Poset from a full order matrix, `leq[x][y]` meaning `x ≤ y`.
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(PosetError::OutOfRange);
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(PosetError::NotReflexive(x));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(PosetError::NotAntisymmetric(x, y));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(PosetError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                    covers.push((x, y));
                }
            }
        }
        let mut heights = vec![0; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&y| leq[y][x]).count());
        for &x in &order {
            heights[x] = covers.iter().filter(|&&(_, y)| y == x).map(|&(w, _)| heights[w] + 1).max().unwrap_or(0);
        }
        Ok(FinitePoset { labels, leq, covers, heights })
    }

    /// Poset generated by covering (or any) relations `x < y`.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in relations {
            if x >= n || y >= n {
                return Err(PosetError::OutOfRange);
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::new(labels, leq)
    }

    /// Chain `0 < 1 < … < n−1`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let rels: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(labels, &rels).expect("a chain is a poset")
    }

    /// Product order; point `(p, q)` has index `p * other.len() + q`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let (n, m) = (self.len(), other.len());
        let labels = (0..n * m).map(|k| format!("({},{})", self.labels[k / m], other.labels[k % m])).collect();
        let leq = (0..n * m)
            .map(|a| (0..n * m).map(|b| self.leq[a / m][b / m] && other.leq[a % m][b % m]).collect())
            .collect();
        FinitePoset::new(labels, leq).expect("product of posets is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        FinitePoset { labels, ..self.clone() }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn height(&self, x: usize) -> usize {
        self.heights[x]
    }

    /// Krull dimension: the largest height.
    pub fn dimension(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// Points sorted by height, then index.
    pub fn by_height(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&x| (self.heights[x], x));
        v
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !(0..self.len()).any(|y| self.lt(x, y))).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !(0..self.len()).any(|y| self.lt(y, x))).collect()
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.leq[x][y]))
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.leq[y][x]))
    }

    /// `L(P, x) = {y ≤ x}`, the smallest open containing `x`.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    pub fn strict_down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.lt(y, x)).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    /// Down-set generated by a family of points.
    pub fn down_closure(&self, points: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&y| points.iter().any(|&x| self.leq[y][x])).collect()
    }

    pub fn is_open(&self, set: &[usize]) -> bool {
        set.iter().all(|&x| (0..self.len()).all(|y| !self.leq[y][x] || set.contains(&y)))
    }

    /// All open sets (down-sets), each sorted, in a deterministic order.
    pub fn opens(&self) -> Vec<Vec<usize>> {
        // down-sets are the down-closures of antichains
        let mut out = BTreeSet::new();
        let n = self.len();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(anti) = stack.pop() {
            let closure = self.down_closure(&anti);
            if !out.insert(closure) {
                continue;
            }
            let start = anti.last().map(|&a| a + 1).unwrap_or(0);
            for x in start..n {
                if anti.iter().all(|&a| !self.leq[a][x] && !self.leq[x][a]) {
                    let mut next = anti.clone();
                    next.push(x);
                    stack.push(next);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = out.into_iter().collect();
        v.sort_by_key(|s| (s.len(), s.clone()));
        v
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.meet_of(&[x, y])
    }

    pub fn meet_of(&self, points: &[usize]) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&z| points.iter().all(|&p| self.leq[z][p])).collect();
        lower.iter().copied().find(|&z| lower.iter().all(|&w| self.leq[w][z]))
    }

    /// Greatest element of `∩ L(P, p)`: `Ok(None)` if the intersection is
    /// empty, `Err(())` if it is non-empty without a greatest element.
    pub fn intersection_top(&self, points: &[usize]) -> Result<Option<usize>, ()> {
        let lower: Vec<usize> = (0..self.len()).filter(|&z| points.iter().all(|&p| self.leq[z][p])).collect();
        if lower.is_empty() {
            return Ok(None);
        }
        lower.iter().copied().find(|&z| lower.iter().all(|&w| self.leq[w][z])).map(Some).ok_or(())
    }

    pub fn is_meet_semilattice(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.meet(x, y).is_some()))
    }

    /// Connected components of the comparability graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in 0..n {
                    if comp[y] == usize::MAX && (self.leq[x][y] || self.leq[y][x]) {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced subposet on `points` (in the given order).
    pub fn subposet(&self, points: &[usize]) -> FinitePoset {
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let leq = points.iter().map(|&a| points.iter().map(|&b| self.leq[a][b]).collect()).collect();
        FinitePoset::new(labels, leq).expect("subposet of a poset")
    }

    /// All strict chains `x₀ < x₁ < … < x_k`, grouped by length `k`.
    pub fn strict_chains(&self) -> Vec<Vec<Vec<usize>>> {
        let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut current: Vec<Vec<usize>> = (0..self.len()).map(|x| vec![x]).collect();
        while !current.is_empty() {
            let mut next = Vec::new();
            for c in &current {
                let last = *c.last().expect("chains are non-empty");
                for y in 0..self.len() {
                    if self.lt(last, y) {
                        let mut d = c.clone();
                        d.push(y);
                        next.push(d);
                    }
                }
            }
            by_len.push(current);
            current = next;
        }
        by_len
    }

    /// An order isomorphism onto `other`, if one exists.
    pub fn isomorphism_to(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        let sig = |p: &FinitePoset, x: usize| (p.heights[x], p.down_set(x).len(), p.up_set(x).len());
        let order = self.by_height();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(
            k: usize,
            order: &[usize],
            a: &FinitePoset,
            b: &FinitePoset,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&FinitePoset, usize) -> (usize, usize, usize),
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..b.len() {
                if used[y] || sig(a, x) != sig(b, y) {
                    continue;
                }
                let ok = order[..k].iter().all(|&w| a.leq(w, x) == b.leq(map[w], y) && a.leq(x, w) == b.leq(y, map[w]));
                if ok {
                    map[x] = y;
                    used[y] = true;
                    if rec(k + 1, order, a, b, map, used, sig) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        rec(0, &order, self, other, &mut map, &mut used, &sig).then_some(map)
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> =
            self.covers.iter().map(|&(x, y)| format!("{} < {}", self.labels[x], self.labels[y])).collect();
        write!(f, "FinitePoset[{}; {}]", self.labels.join(", "), edges.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinitePoset {
        let labels = ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect();
        FinitePoset::from_relations(labels, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn p1() -> FinitePoset {
        let labels = ["g", "m0", "m1"].iter().map(|s| s.to_string()).collect();
        FinitePoset::from_relations(labels, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn chain_down_set() {
        let c = FinitePoset::chain(2);
        assert_eq!(c.down_set(1), vec![0, 1]);
        assert_eq!(c.dimension(), 1);
    }

    #[test]
    fn diamond_meet() {
        let d = diamond();
        assert_eq!(d.meet(1, 2), Some(0));
        assert_eq!(d.height(3), 2);
        assert_eq!(d.opens().len(), 6);
    }

    #[test]
    fn p1_is_meet_semilattice() {
        let p = p1();
        assert!(p.is_meet_semilattice());
        assert_eq!(p.maximal(), vec![1, 2]);
        assert_eq!(p.least(), Some(0));
        assert_eq!(p.intersection_top(&[1, 2]), Ok(Some(0)));
    }

    #[test]
    fn non_separated_intersection() {
        // two minimal points below two maximal ones
        let labels = (0..4).map(|i| i.to_string()).collect();
        let p = FinitePoset::from_relations(labels, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(p.intersection_top(&[2, 3]), Err(()));
        assert!(!p.is_meet_semilattice());
    }

    #[test]
    fn rejects_cycles() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FinitePoset::from_relations(labels, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn product_and_isomorphism() {
        let c = FinitePoset::chain(2);
        let sq = c.product(&c);
        assert!(sq.isomorphism_to(&diamond()).is_some());
        assert!(sq.isomorphism_to(&FinitePoset::chain(4)).is_none());
        let pp = p1().product(&p1());
        assert_eq!(pp.len(), 9);
        assert_eq!(pp.maximal().len(), 4);
    }

    #[test]
    fn chains_of_diamond() {
        let ch = diamond().strict_chains();
        let counts: Vec<usize> = ch.iter().map(|c| c.len()).collect();
        assert_eq!(counts, vec![4, 5, 2]);
    }
}
