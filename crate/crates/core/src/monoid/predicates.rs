//! Monoid-level predicates: cancellative, s-cancellative (three ways),
//! s-regular, `𝔭_c`, torsion-free, smooth and seminormal.

use std::collections::HashMap;

use super::element::monomials;
use super::{Bounded, Element, Monoid, MonoidError, Presentation, Prime, Relation, Word, DEFAULT_EFFORT};
use crate::abelian::AbMap;
use crate::linalg::Matrix;
use num_traits::Zero;

use crate::Int;

/// `a x = a y` with `x ≠ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancelWitness {
    pub x: Word,
    pub y: Word,
    pub a: Word,
}

/// Failure of unit-map injectivity for a covering pair `q ⊂ p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitKernelWitness {
    pub p: Prime,
    pub q: Prime,
    /// Non-trivial unit of `M_p` (word in the original generators) mapping to 1.
    pub element: Word,
}

/// The three tests of the s-cancellative equivalence.
#[derive(Clone, Debug)]
pub struct SCancellativeReport {
    /// `(xy)^n x = (xy)^n y` over pairs in the ball.
    pub definitional: Bounded<CancelWitness>,
    /// Injectivity of `(M_p)* → (M_q)*`; exact.
    pub unit_injective: Result<(), UnitKernelWitness>,
    /// `x b = y b` for some `b ∉ 𝔭_{xy}`, over pairs in the ball.
    pub via_p_xy: Bounded<CancelWitness>,
}

impl SCancellativeReport {
    /// `Some(false)` if a definite verdict disagrees with the exact one.
    pub fn consistent(&self) -> bool {
        let exact = self.unit_injective.is_ok();
        [&self.definitional, &self.via_p_xy].iter().all(|v| match v.as_bool() {
            Some(b) => b == exact,
            None => true,
        })
    }
}

/// `𝔭_c` with the witnesses for `c^n = b t`.
#[derive(Clone, Debug)]
pub struct PcReport {
    pub prime: Prime,
    /// For each generator `b ∉ 𝔭_c`: `Some((n, t))` with `c^n = b t`, or
    /// `None` if none was found within the bound.
    pub lemma: Vec<(usize, Option<(u32, Word)>)>,
}

impl PcReport {
    pub fn lemma_holds(&self) -> bool {
        self.lemma.iter().all(|(_, w)| w.is_some())
    }
}

fn word_scale(a: &[i64], k: i64) -> Word {
    a.iter().map(|x| x * k).collect()
}

/// Equality of two words of `pres` after inverting the element `s`.
fn equal_after_inverting(pres: &Presentation, s: &[i64], x: &[i64], y: &[i64], effort: usize) -> Result<bool, MonoidError> {
    let mut names = pres.names().to_vec();
    let mut fresh = "s".to_string();
    while names.contains(&fresh) {
        fresh.push('\'');
    }
    names.push(fresh);
    let mut inverted = pres.inverted().to_vec();
    inverted.push(true);
    let pad = |w: &[i64], extra: i64| -> Word {
        let mut v = w.to_vec();
        v.push(extra);
        v
    };
    let mut rels: Vec<Relation> =
        pres.relations().iter().map(|r| Relation { lhs: pad(&r.lhs, 0), rhs: pad(&r.rhs, 0) }).collect();
    rels.push(Relation { lhs: pad(s, 0), rhs: pad(&pres.one(), 1) });
    let q = Presentation::new(names, inverted, rels)?;
    let m = Monoid::new(&q, effort)?;
    Ok(m.equal(&pad(x, 0), &pad(y, 0)))
}

impl Presentation {
    /// Bounded cancellativity: elements of the ball of radius `bound` are
    /// compared in the Grothendieck group; a collision yields a witness.
    pub fn is_cancellative(&self, bound: usize) -> Result<Bounded<CancelWitness>, MonoidError> {
        let m = Monoid::new(self, DEFAULT_EFFORT)?;
        let g = self.grothendieck::<Int>();
        let ball = m.ball(bound);
        let mut classes: HashMap<Vec<Int>, &Element> = HashMap::new();
        for e in &ball {
            let w = m.to_word(e);
            let key = g.canonical(&self.grothendieck_class::<Int>(&w));
            if let Some(prev) = classes.get(&key) {
                let x = m.to_word(prev);
                for a in m.ball(2 * bound) {
                    if m.mul(&a, prev) == m.mul(&a, e) {
                        return Ok(Bounded::Counterexample(CancelWitness { x, y: w, a: m.to_word(&a) }));
                    }
                }
                return Ok(Bounded::Inconclusive {
                    reason: format!("{} and {} agree in G but no cancelling factor within degree {}", m.format(prev), m.format(e), 2 * bound),
                });
            }
            classes.insert(key, e);
        }
        Ok(Bounded::Verified { bound })
    }

    /// Pairs of distinct elements of the ball that agree in `G`, each with a
    /// factor `a` such that `a x = a y` when one is found in the ball.
    fn g_collisions(&self, m: &Monoid, bound: usize) -> Vec<(Element, Element)> {
        let g = self.grothendieck::<Int>();
        let ball = m.ball(bound);
        let mut by_class: HashMap<Vec<Int>, Vec<Element>> = HashMap::new();
        for e in ball {
            let key = g.canonical(&self.grothendieck_class::<Int>(&m.to_word(&e)));
            by_class.entry(key).or_default().push(e);
        }
        let mut classes: Vec<Vec<Element>> = by_class.into_values().collect();
        classes.sort();
        let mut out = Vec::new();
        for c in classes {
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    out.push((c[i].clone(), c[j].clone()));
                }
            }
        }
        out
    }

    fn cancelling_factor(m: &Monoid, x: &Element, y: &Element, bound: usize) -> Word {
        for a in m.ball(bound) {
            if m.mul(&a, x) == m.mul(&a, y) {
                return m.to_word(&a);
            }
        }
        Vec::new()
    }

    /// Exact s-cancellativity: injectivity of the unit maps of all covering
    /// pairs of primes.
    pub fn s_cancellative_exact(&self) -> Result<(), UnitKernelWitness> {
        let primes = self.primes();
        let locs: Vec<_> = primes.iter().map(|p| self.localize(p)).collect();
        let units: Vec<_> = locs.iter().map(|l| l.presentation.units::<Int>()).collect();
        for (i, p) in primes.iter().enumerate() {
            for (j, q) in primes.iter().enumerate() {
                if i == j || !q.is_subset(p) {
                    continue;
                }
                let covering = !primes.iter().enumerate().any(|(k, r)| k != i && k != j && q.is_subset(r) && r.is_subset(p));
                if !covering {
                    continue;
                }
                let (lp, lq) = (&locs[i], &locs[j]);
                let (up, uq) = (&units[i], &units[j]);
                let cols: Vec<Vec<Int>> = up
                    .generators
                    .iter()
                    .map(|&g| {
                        let img = lq.gen_images[lp.origin[g]].clone();
                        uq.coordinates(&img).expect("units map to units")
                    })
                    .collect();
                let f = AbMap::new(up.group.clone(), uq.group.clone(), Matrix::from_cols(uq.generators.len(), cols))
                    .expect("unit map is well defined");
                if let Some(k) = f.kernel_witness() {
                    let mut element = vec![0; self.ngens()];
                    for (c, &g) in k.iter().zip(&up.generators) {
                        element[lp.origin[g]] += i64::try_from(c.clone()).expect("small witness");
                    }
                    return Err(UnitKernelWitness { p: p.clone(), q: q.clone(), element });
                }
            }
        }
        Ok(())
    }

    /// `𝔭_c`: union of all primes not containing `c`, with the witnesses of
    /// `c^n = b t` for generators `b` outside it.
    pub fn p_c(&self, c: &[i64], bound: usize) -> Result<PcReport, MonoidError> {
        let n = self.ngens();
        let mut prime = Prime::empty(n);
        for q in self.primes() {
            if !q.contains(c) {
                prime = prime.union(&q);
            }
        }
        let m = Monoid::new(self, DEFAULT_EFFORT)?;
        let ball = m.ball(bound);
        let mut lemma = Vec::new();
        for b in 0..n {
            if prime.contains_gen(b) {
                continue;
            }
            let eb = m.nf(&self.unit(b));
            let mut found = None;
            'search: for k in 1..=bound as u32 {
                let target = m.nf(&word_scale(c, k as i64));
                for t in &ball {
                    if m.mul(&eb, t) == target {
                        found = Some((k, m.to_word(t)));
                        break 'search;
                    }
                }
            }
            lemma.push((b, found));
        }
        Ok(PcReport { prime, lemma })
    }

    /// The three tests of the s-cancellative equivalence on the ball of
    /// radius `bound`.
    pub fn s_cancellative_report(&self, bound: usize) -> Result<SCancellativeReport, MonoidError> {
        let m = Monoid::new(self, DEFAULT_EFFORT)?;
        let pairs = self.g_collisions(&m, bound);
        let primes = self.primes();
        let mut definitional = Bounded::Verified { bound };
        let mut via_p_xy = Bounded::Verified { bound };
        let mut loc_cache: HashMap<Prime, Result<(Monoid, super::Localization), MonoidError>> = HashMap::new();
        for (x, y) in &pairs {
            let xy = m.mul(x, y);
            let (xw, yw) = (m.to_word(x), m.to_word(y));
            // (1): search n, then certify failure by inverting xy
            if definitional.as_bool() == Some(true) {
                let mut ok = false;
                let mut p = m.one();
                for _ in 0..=bound {
                    if m.mul(&p, x) == m.mul(&p, y) {
                        ok = true;
                        break;
                    }
                    p = m.mul(&p, &xy);
                }
                if !ok {
                    match equal_after_inverting(self, &m.to_word(&xy), &xw, &yw, DEFAULT_EFFORT) {
                        Ok(true) => {}
                        Ok(false) => {
                            let a = Self::cancelling_factor(&m, x, y, 2 * bound);
                            definitional = Bounded::Counterexample(CancelWitness { x: xw.clone(), y: yw.clone(), a });
                        }
                        Err(e) => definitional = Bounded::Inconclusive { reason: e.to_string() },
                    }
                }
            }
            // (4): equality in the localization at 𝔭_{xy}
            if via_p_xy.as_bool() == Some(true) {
                let xyw = m.to_word(&xy);
                let mut pxy = Prime::empty(self.ngens());
                for q in &primes {
                    if !q.contains(&xyw) {
                        pxy = pxy.union(q);
                    }
                }
                let entry = loc_cache.entry(pxy).or_insert_with_key(|p| {
                    let loc = self.localize(p);
                    Monoid::new(&loc.presentation, DEFAULT_EFFORT).map(|lm| (lm, loc))
                });
                match entry {
                    Ok((lm, loc)) => {
                        if !lm.equal(&loc.map_word(&xw), &loc.map_word(&yw)) {
                            let a = Self::cancelling_factor(&m, x, y, 2 * bound);
                            via_p_xy = Bounded::Counterexample(CancelWitness { x: xw.clone(), y: yw.clone(), a });
                        }
                    }
                    Err(e) => via_p_xy = Bounded::Inconclusive { reason: e.to_string() },
                }
            }
        }
        Ok(SCancellativeReport { definitional, unit_injective: self.s_cancellative_exact(), via_p_xy })
    }

    /// Bounded s-regularity of `a`: every `a^m u = a^m v` in the ball must be
    /// resolved by some `(uv)^n u = (uv)^n v`; a failure is certified by
    /// `u ≠ v` after inverting `uv`.
    pub fn is_s_regular(&self, a: &[i64], bound: usize) -> Result<Bounded<(Word, Word, u32)>, MonoidError> {
        let m = Monoid::new(self, DEFAULT_EFFORT)?;
        let ball = m.ball(bound);
        let ea = m.nf(a);
        let mut am = m.one();
        let mut inconclusive = None;
        for k in 1..=bound as u32 {
            am = m.mul(&am, &ea);
            let mut groups: HashMap<Element, Vec<&Element>> = HashMap::new();
            for u in &ball {
                groups.entry(m.mul(&am, u)).or_default().push(u);
            }
            let mut keys: Vec<_> = groups.keys().cloned().collect();
            keys.sort();
            for key in keys {
                let g = &groups[&key];
                for i in 0..g.len() {
                    for j in i + 1..g.len() {
                        let (u, v) = (g[i], g[j]);
                        let uv = m.mul(u, v);
                        let mut p = m.one();
                        let mut ok = false;
                        for _ in 0..=bound {
                            if m.mul(&p, u) == m.mul(&p, v) {
                                ok = true;
                                break;
                            }
                            p = m.mul(&p, &uv);
                        }
                        if ok {
                            continue;
                        }
                        match equal_after_inverting(self, &m.to_word(&uv), &m.to_word(u), &m.to_word(v), DEFAULT_EFFORT) {
                            Ok(true) => {}
                            Ok(false) => return Ok(Bounded::Counterexample((m.to_word(u), m.to_word(v), k))),
                            Err(e) => inconclusive = Some(e.to_string()),
                        }
                    }
                }
            }
        }
        Ok(match inconclusive {
            Some(reason) => Bounded::Inconclusive { reason },
            None => Bounded::Verified { bound },
        })
    }

    fn require_cancellative(&self, bound: usize) -> Result<(), MonoidError> {
        match self.is_cancellative(bound)? {
            Bounded::Verified { .. } => Ok(()),
            _ => Err(MonoidError::RequiresCancellative),
        }
    }

    /// Torsion-freeness via the Grothendieck group (requires cancellative).
    pub fn is_torsion_free(&self, bound: usize) -> Result<bool, MonoidError> {
        self.require_cancellative(bound)?;
        Ok(self.grothendieck::<Int>().torsion().is_empty())
    }

    /// `M ≅ N^r × Z^s`: the sharp quotient `M/M*` is free on `r` atoms, `G` is
    /// torsion-free and `rank G = r + rank M*`.
    pub fn is_smooth_monoid(&self) -> Result<bool, MonoidError> {
        let units = self.units::<Int>();
        if !units.group.torsion().is_empty() {
            return Ok(false);
        }
        let g = self.grothendieck::<Int>();
        if !g.torsion().is_empty() {
            return Ok(false);
        }
        let Some(r) = self.sharp_quotient_free_rank()? else {
            return Ok(false);
        };
        Ok(g.rank() == r + units.group.rank())
    }

    /// Rank of `M/M*` if it is free, found by eliminating generators that are
    /// products of the others and completing the rest.
    pub fn sharp_quotient_free_rank(&self) -> Result<Option<usize>, MonoidError> {
        let (unit, _) = self.unit_closure();
        let mut alive: Vec<usize> = (0..self.ngens()).filter(|&i| !unit[i]).collect();
        let restrict = |w: &Word, alive: &[usize]| -> Word { alive.iter().map(|&i| w[i]).collect() };
        let mut rels: Vec<(Word, Word)> = self
            .relations()
            .iter()
            .map(|r| (restrict(&r.lhs, &alive), restrict(&r.rhs, &alive)))
            .collect();
        loop {
            let k = alive.len();
            let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
            let pres = Presentation::new(
                names,
                vec![false; k],
                rels.iter().map(|(l, r)| Relation { lhs: l.clone(), rhs: r.clone() }).collect(),
            )?;
            let m = Monoid::new(&pres, DEFAULT_EFFORT)?;
            let rules = m.system().rules().to_vec();
            if rules.is_empty() {
                return Ok(Some(k));
            }
            // a rule with one side a single generator absent from the other side
            let single = |w: &Word| -> Option<usize> {
                (w.iter().sum::<i64>() == 1).then(|| w.iter().position(|&e| e == 1).expect("degree one"))
            };
            let elim = rules.iter().find_map(|(l, r)| {
                for (s, o) in [(l, r), (r, l)] {
                    if let Some(gi) = single(s) {
                        if o[gi] == 0 {
                            return Some((gi, o.clone()));
                        }
                    }
                }
                None
            });
            let Some((gi, value)) = elim else {
                return Ok(None);
            };
            if value.iter().all(|&e| e == 0) {
                // a non-unit generator equal to 1 cannot happen in M/M*
                return Ok(None);
            }
            let subst = |w: &mut Word| {
                let e = w[gi];
                if e != 0 {
                    w[gi] = 0;
                    for i in 0..w.len() {
                        w[i] += e * value[i];
                    }
                }
            };
            let keep: Vec<usize> = (0..k).filter(|&i| i != gi).collect();
            rels = rels
                .into_iter()
                .map(|(mut l, mut r)| {
                    subst(&mut l);
                    subst(&mut r);
                    (restrict(&l, &keep), restrict(&r, &keep))
                })
                .filter(|(l, r)| l != r)
                .collect();
            alive.remove(gi);
        }
    }

    /// Seminormality (requires cancellative): every `x ∈ G` with `x², x³` in
    /// the image of the ball lies in the image of `M`. Membership is decided
    /// exactly when a positive grading bounds the degree of a preimage.
    pub fn is_seminormal(&self, bound: usize) -> Result<Bounded<(Word, Word)>, MonoidError> {
        self.require_cancellative(bound)?;
        let m = Monoid::new(self, DEFAULT_EFFORT)?;
        let g = self.grothendieck::<Int>();
        let canon = |w: &[i64]| g.canonical(&self.grothendieck_class::<Int>(w));
        let ball: Vec<Word> = m.ball(bound).iter().map(|e| m.to_word(e)).collect();
        let images: Vec<Vec<Int>> = (0..self.ngens()).map(|i| canon(&self.unit(i))).collect();
        let grading = positive_grading(g.canonical_factors(), &images, self);
        for m2 in &ball {
            for m3 in &ball {
                // x = m3 / m2 with x² = m2 ⇔ 2 m3 = 3 m2
                if canon(&word_scale(m3, 2)) != canon(&word_scale(m2, 3)) {
                    continue;
                }
                let x: Word = m3.iter().zip(m2).map(|(a, b)| a - b).collect();
                let cx = canon(&x);
                let degree = match &grading {
                    Some(phi) => {
                        let val: Int = phi.iter().zip(&cx).map(|(a, b)| a * b).sum();
                        let min: Int = self
                            .inverted()
                            .iter()
                            .enumerate()
                            .filter(|(_, &inv)| !inv)
                            .map(|(i, _)| phi.iter().zip(&images[i]).map(|(a, b)| a * b).sum::<Int>())
                            .min()
                            .unwrap_or_else(|| Int::from(1));
                        if val < Int::from(0) {
                            return Ok(Bounded::Counterexample((m3.clone(), m2.clone())));
                        }
                        usize::try_from(val / min).unwrap_or(usize::MAX)
                    }
                    None => bound,
                };
                if degree > 64 {
                    return Err(MonoidError::MembershipBoundExceeded(degree));
                }
                let member = monomials(self.ngens(), degree).iter().any(|v| canon(v) == cx);
                if !member {
                    if grading.is_some() {
                        return Ok(Bounded::Counterexample((m3.clone(), m2.clone())));
                    }
                    return Err(MonoidError::MembershipBoundExceeded(bound));
                }
            }
        }
        Ok(Bounded::Verified { bound })
    }
}

/// A linear form on the free part of `G` that is positive on every
/// non-inverted generator, when one of a few simple candidates works.
fn positive_grading(factors: &[Int], images: &[Vec<Int>], pres: &Presentation) -> Option<Vec<Int>> {
    if pres.inverted().iter().any(|&b| b) {
        return None;
    }
    let free: Vec<bool> = factors.iter().map(|d| d.is_zero()).collect();
    let mask = |v: &[Int]| -> Vec<Int> { v.iter().zip(&free).map(|(x, &f)| if f { x.clone() } else { Int::from(0) }).collect() };
    let mut candidates: Vec<Vec<Int>> = Vec::new();
    let sum = images.iter().fold(vec![Int::from(0); factors.len()], |acc, v| acc.iter().zip(v).map(|(a, b)| a + b).collect());
    candidates.push(mask(&sum));
    candidates.extend(images.iter().map(|v| mask(v)));
    for k in 0..factors.len() {
        for s in [1, -1] {
            let mut e = vec![Int::from(0); factors.len()];
            e[k] = Int::from(s);
            candidates.push(mask(&e));
        }
    }
    candidates.into_iter().find(|phi| {
        images.iter().all(|v| phi.iter().zip(v).map(|(a, b)| a * b).sum::<Int>() > Int::from(0))
    })
}

impl<W> Bounded<W> {
    /// `Some(true)` for a verified bound, `Some(false)` for a counterexample.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Bounded::Verified { .. } => Some(true),
            Bounded::Counterexample(_) => Some(false),
            Bounded::Inconclusive { .. } => None,
        }
    }
}
