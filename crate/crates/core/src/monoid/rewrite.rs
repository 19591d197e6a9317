//! Commutative rewriting systems on exponent vectors and their completion.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::MonoidError;

/// Monomial over the rewriting variables; all entries non-negative.
pub type Mono = Vec<i64>;

/// Total degree, ties broken by comparing exponents from the last variable
/// down (later variables weigh more).
pub fn deglex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn overlaps(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).any(|(x, y)| *x > 0 && *y > 0)
}

/// Oriented rules `lhs → rhs` with `lhs > rhs` in [`deglex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    nvars: usize,
    rules: Vec<(Mono, Mono)>,
    complete: bool,
    /// Critical pairs examined during completion.
    bound_used: usize,
}

impl RewriteSystem {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rules(&self) -> &[(Mono, Mono)] {
        &self.rules
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn bound_used(&self) -> usize {
        self.bound_used
    }

    /// Normal form: rewrite until no left-hand side divides.
    pub fn reduce(&self, w: &[i64]) -> Mono {
        let mut w = w.to_vec();
        'outer: loop {
            for (l, r) in &self.rules {
                if divides(l, &w) {
                    for i in 0..w.len() {
                        w[i] += r[i] - l[i];
                    }
                    continue 'outer;
                }
            }
            return w;
        }
    }

    /// Completes the relations `(u, v)` into a confluent system, examining at
    /// most `effort` critical pairs.
    pub fn complete(nvars: usize, relations: &[(Mono, Mono)], effort: usize) -> Result<Self, MonoidError> {
        let mut rs = RewriteSystem { nvars, rules: Vec::new(), complete: false, bound_used: 0 };
        let mut queue: VecDeque<(Mono, Mono)> = relations.iter().cloned().collect();
        while let Some((u, v)) = queue.pop_front() {
            rs.bound_used += 1;
            if rs.bound_used > effort {
                return Err(MonoidError::CompletionExceededBound(effort));
            }
            let u = rs.reduce(&u);
            let v = rs.reduce(&v);
            let (l, r) = match deglex(&u, &v) {
                Ordering::Equal => continue,
                Ordering::Greater => (u, v),
                Ordering::Less => (v, u),
            };
            // rules whose lhs the new rule reduces are re-queued
            let mut kept = Vec::with_capacity(rs.rules.len() + 1);
            for (a, b) in std::mem::take(&mut rs.rules) {
                if divides(&l, &a) {
                    queue.push_back((a, b));
                } else {
                    kept.push((a, b));
                }
            }
            let new_rule = (l, r);
            let mut pairs = Vec::new();
            for (a, b) in &kept {
                if overlaps(a, &new_rule.0) {
                    let lcm: Mono = a.iter().zip(&new_rule.0).map(|(x, y)| *x.max(y)).collect();
                    let s1: Mono = (0..nvars).map(|i| lcm[i] - a[i] + b[i]).collect();
                    let s2: Mono = (0..nvars).map(|i| lcm[i] - new_rule.0[i] + new_rule.1[i]).collect();
                    pairs.push((s1, s2));
                }
            }
            kept.push(new_rule);
            rs.rules = kept;
            let snapshot = rs.clone();
            for (_, b) in rs.rules.iter_mut() {
                *b = snapshot.reduce(b);
            }
            queue.extend(pairs);
        }
        rs.rules.sort_by(|a, b| deglex(&a.0, &b.0).then_with(|| deglex(&a.1, &b.1)));
        rs.complete = true;
        Ok(rs)
    }

    /// Re-checks local confluence: every critical pair joins.
    pub fn check_confluent(&self) -> bool {
        for (i, (a, b)) in self.rules.iter().enumerate() {
            for (c, d) in &self.rules[i + 1..] {
                if !overlaps(a, c) {
                    continue;
                }
                let lcm: Mono = a.iter().zip(c).map(|(x, y)| *x.max(y)).collect();
                let s1: Mono = (0..self.nvars).map(|k| lcm[k] - a[k] + b[k]).collect();
                let s2: Mono = (0..self.nvars).map(|k| lcm[k] - c[k] + d[k]).collect();
                if self.reduce(&s1) != self.reduce(&s2) {
                    return false;
                }
            }
        }
        self.rules.iter().all(|(l, r)| deglex(l, r) == Ordering::Greater)
    }
}
