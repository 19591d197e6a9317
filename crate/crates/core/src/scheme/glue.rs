use std::collections::{HashMap, HashSet};

use super::{MonoidHom, Scheme, SchemeError};
use crate::linalg::{solve_integer, Matrix};
use crate::monoid::{monomials, Localization, Monoid, Presentation, Prime, Word, DEFAULT_EFFORT};
use crate::poset::FinitePoset;
use crate::Int;

/// Overlap of two charts: an affine monoid `N` with maps from both charts,
/// each of which must identify `N` with a localization of its chart.
#[derive(Clone, Debug)]
pub struct Overlap {
    pub left: usize,
    pub right: usize,
    pub monoid: Presentation,
    /// Images of the left chart's generators, as words in `monoid`.
    pub left_map: Vec<Word>,
    pub right_map: Vec<Word>,
}

/// A chart map `φ: M → N` certified to be an isomorphism `M_S ≅ N`.
struct Embedding {
    /// Generators of `M` that become units.
    inverted: Vec<bool>,
    /// `ψ = φ⁻¹` on generators of `N`, as words over `M` (negative only on `S`).
    inverse: Vec<Word>,
}

fn apply(images: &[Word], w: &[i64], len: usize) -> Word {
    MonoidHom { images: images.to_vec() }.apply(w, len)
}

fn embedding(chart: &Presentation, n: &Monoid, phi: &[Word], label: &str) -> Result<Embedding, SchemeError> {
    let np = n.presentation();
    let bad = |msg: String| SchemeError::InconsistentGluing(format!("{label}: {msg}"));
    if phi.len() != chart.ngens() || phi.iter().any(|w| w.len() != np.ngens()) {
        return Err(bad("map has the wrong number of generators".into()));
    }
    let phi: Vec<Word> = phi
        .iter()
        .map(|w| np.unit_normal_word(w).ok_or_else(|| bad("negative exponent on a non-unit".into())))
        .collect::<Result<_, _>>()?;
    MonoidHom { images: phi.clone() }.validate(chart, n).map_err(bad)?;
    let (unit, _) = np.unit_closure();
    let inverted: Vec<bool> =
        (0..chart.ngens()).map(|g| chart.is_inverted(g) || phi[g].iter().zip(&unit).all(|(&e, &u)| e == 0 || u)).collect();
    let to_n = |w: &[i64]| np.unit_normal_word(&apply(&phi, w, np.ngens()));
    let hits = |w: &[i64], h: usize| to_n(w).is_some_and(|img| n.equal(&img, &np.unit(h)));
    let nc = chart.ngens();
    let s: Vec<usize> = (0..nc).filter(|&g| inverted[g]).collect();
    let mut inverse = Vec::with_capacity(np.ngens());
    for h in 0..np.ngens() {
        let mut found = None;
        // a generator or the inverse of a unit generator
        for g in 0..nc {
            for sign in [1, -1] {
                if sign < 0 && !inverted[g] {
                    continue;
                }
                let mut w = vec![0; nc];
                w[g] = sign;
                if found.is_none() && hits(&w, h) {
                    found = Some(w);
                }
            }
        }
        // a solution in the Grothendieck group with admissible signs
        if found.is_none() {
            let rels: Vec<Vec<Int>> = np
                .relations()
                .iter()
                .map(|r| (0..np.ngens()).map(|i| Int::from(r.lhs[i] - r.rhs[i])).collect())
                .collect();
            let mut m = Matrix::from_fn(np.ngens(), nc, |i, j| Int::from(phi[j][i]));
            if !rels.is_empty() {
                m = m.hstack(&Matrix::from_rows(np.ngens(), rels).transpose());
            }
            let rhs: Vec<Int> = (0..np.ngens()).map(|i| Int::from(i64::from(i == h))).collect();
            if let Some(sol) = solve_integer(&m, &rhs) {
                let w: Option<Word> = sol[..nc].iter().map(|v| i64::try_from(v.clone()).ok()).collect();
                if let Some(w) = w {
                    if (0..nc).all(|g| w[g] >= 0 || inverted[g]) && hits(&w, h) {
                        found = Some(w);
                    }
                }
            }
        }
        // short words
        if found.is_none() {
            for mono in monomials(nc + s.len(), 3) {
                let mut w = mono[..nc].to_vec();
                for (k, &g) in s.iter().enumerate() {
                    w[g] -= mono[nc + k];
                }
                if hits(&w, h) {
                    found = Some(w);
                    break;
                }
            }
        }
        let w = found.ok_or_else(|| bad(format!("generator {} is not in the image of a localization", np.name(h))))?;
        inverse.push(w);
    }
    // certify ψ: N → M_S is a homomorphism inverse to φ
    let loc = chart.invert(&inverted);
    let ml = Monoid::new(&loc.presentation, DEFAULT_EFFORT)?;
    let into_loc = |w: &Word| loc.map_word(w);
    for r in np.relations() {
        let (a, b) = (apply(&inverse, &r.lhs, nc), apply(&inverse, &r.rhs, nc));
        if !ml.equal(&into_loc(&a), &into_loc(&b)) {
            return Err(bad("inverse map does not respect the overlap relations".into()));
        }
    }
    for g in 0..nc {
        let back = apply(&inverse, &phi[g], nc);
        if !ml.equal(&into_loc(&back), &into_loc(&chart.unit(g))) {
            return Err(bad(format!("{} is not recovered from the overlap", chart.name(g))));
        }
    }
    Ok(Embedding { inverted, inverse })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Scheme {
    /// Glues affine charts along overlaps; points are identified by
    /// transporting characters through the overlap maps.
    pub fn glue(charts: &[(String, Presentation)], overlaps: &[Overlap]) -> Result<Scheme, SchemeError> {
        let primes: Vec<Vec<Prime>> = charts.iter().map(|(_, m)| m.primes()).collect();
        let offsets: Vec<usize> = primes
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.len();
                Some(o)
            })
            .collect();
        let total: usize = primes.iter().map(|p| p.len()).sum();
        let mut uf = UnionFind((0..total).collect());
        // transport[(from, to)]: generators of chart `from` as words over chart `to`
        let mut transport: HashMap<(usize, usize), Vec<Word>> = HashMap::new();
        let mut identified: HashMap<(usize, usize), HashSet<(usize, usize)>> = HashMap::new();
        for o in overlaps {
            if o.left >= charts.len() || o.right >= charts.len() || o.left == o.right {
                return Err(SchemeError::InconsistentGluing("overlap refers to an unknown chart".into()));
            }
            let (lname, rname) = (&charts[o.left].0, &charts[o.right].0);
            let n = Monoid::new(&o.monoid, DEFAULT_EFFORT)?;
            let el = embedding(&charts[o.left].1, &n, &o.left_map, lname)?;
            let er = embedding(&charts[o.right].1, &n, &o.right_map, rname)?;
            let nl = charts[o.left].1.ngens();
            let nr = charts[o.right].1.ngens();
            let phi_l: Vec<Word> = o.left_map.clone();
            let phi_r: Vec<Word> = o.right_map.clone();
            transport.insert((o.right, o.left), phi_r.iter().map(|w| apply(&el.inverse, w, nl)).collect());
            transport.insert((o.left, o.right), phi_l.iter().map(|w| apply(&er.inverse, w, nr)).collect());
            let pairs = identified.entry((o.left.min(o.right), o.left.max(o.right))).or_default();
            for q in o.monoid.primes() {
                let pull = |phi: &[Word], c: usize, e: &Embedding| -> Result<usize, SchemeError> {
                    let chi: Vec<bool> = phi.iter().map(|w| !q.contains(w)).collect();
                    debug_assert!(e.inverted.iter().zip(&chi).all(|(s, c)| !s || *c));
                    primes[c].iter().position(|p| p.character() == chi.as_slice()).ok_or_else(|| {
                        SchemeError::InconsistentGluing(format!("{} has no prime over an overlap point", charts[c].0))
                    })
                };
                let a = pull(&phi_l, o.left, &el)?;
                let b = pull(&phi_r, o.right, &er)?;
                uf.union(offsets[o.left] + a, offsets[o.right] + b);
                let (first, second) = if o.left < o.right { (a, b) } else { (b, a) };
                pairs.insert((first, second));
            }
        }
        // classes, and the chart-local index of each class per chart
        let chart_of = |g: usize| offsets.iter().rposition(|&o| o <= g).expect("offsets start at 0");
        let mut class_ids: HashMap<usize, usize> = HashMap::new();
        let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
        for g in 0..total {
            let r = uf.find(g);
            let id = *class_ids.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            let c = chart_of(g);
            if members[id].iter().any(|&(d, _)| d == c) {
                return Err(SchemeError::InconsistentGluing(format!("two points of {} are identified", charts[c].0)));
            }
            members[id].push((c, g - offsets[c]));
        }
        // cocycle condition: shared points of two charts are exactly their overlap
        for a in 0..charts.len() {
            for b in a + 1..charts.len() {
                let shared: HashSet<(usize, usize)> = members
                    .iter()
                    .filter_map(|m| {
                        let pa = m.iter().find(|&&(c, _)| c == a)?.1;
                        let pb = m.iter().find(|&&(c, _)| c == b)?.1;
                        Some((pa, pb))
                    })
                    .collect();
                let expected = identified.get(&(a, b)).cloned().unwrap_or_default();
                if shared != expected {
                    return Err(SchemeError::InconsistentGluing(format!(
                        "{} and {} share points outside their overlap",
                        charts[a].0, charts[b].0
                    )));
                }
            }
        }
        let npts = members.len();
        let home: Vec<(usize, usize)> = members.iter().map(|m| m[0]).collect();
        let local = |x: usize, c: usize| members[x].iter().find(|&&(d, _)| d == c).map(|&(_, p)| p);
        let mut rels = Vec::new();
        for c in 0..charts.len() {
            for (x, _) in members.iter().enumerate() {
                for y in 0..npts {
                    if let (Some(p), Some(q)) = (local(x, c), local(y, c)) {
                        if p != q && primes[c][p].is_subset(&primes[c][q]) {
                            rels.push((x, y));
                        }
                    }
                }
            }
        }
        let labels =
            home.iter().map(|&(c, p)| format!("{}:{}", charts[c].0, primes[c][p].display(&charts[c].1))).collect();
        let space = FinitePoset::from_relations(labels, &rels)
            .map_err(|e| SchemeError::InconsistentGluing(format!("glued order is not a partial order: {e}")))?;
        for c in 0..charts.len() {
            let pts: Vec<usize> = (0..npts).filter(|&x| local(x, c).is_some()).collect();
            if !space.is_open(&pts) {
                return Err(SchemeError::InconsistentGluing(format!("{} is not open after gluing", charts[c].0)));
            }
            for d in c + 1..charts.len() {
                let both: Vec<usize> = pts.iter().copied().filter(|&x| local(x, d).is_some()).collect();
                if both.is_empty() {
                    continue;
                }
                let top = both.iter().copied().find(|&t| both.iter().all(|&x| space.leq(x, t)));
                if top.is_none_or(|t| space.down_set(t) != both) {
                    return Err(SchemeError::NotSeparated(format!(
                        "{} and {} meet in a non-affine set",
                        charts[c].0, charts[d].0
                    )));
                }
            }
        }
        let locs: Vec<Localization> = home.iter().map(|&(c, p)| charts[c].1.localize(&primes[c][p])).collect();
        let mut covers = HashMap::new();
        for &(x, y) in space.covers() {
            let (c, _) = home[x];
            let (i, _) = home[y];
            let ly = &locs[y];
            let images: Vec<Word> = ly
                .origin
                .iter()
                .map(|&g| {
                    let w = if i == c {
                        charts[i].1.unit(g)
                    } else {
                        transport.get(&(i, c)).expect("charts sharing a point overlap")[g].clone()
                    };
                    locs[x].map_word(&w)
                })
                .collect();
            let images = images
                .iter()
                .map(|w| locs[x].presentation.unit_normal_word(w).expect("units map to units"))
                .collect();
            covers.insert((x, y), MonoidHom { images });
        }
        Scheme::from_parts(space, locs.into_iter().map(|l| l.presentation).collect(), covers)
    }
}

/// `Pⁿ` glued from `n + 1` copies of `Nⁿ`; chart `i` has generators
/// `x{j}/x{i}`.
pub fn projective_space(n: usize) -> Result<Scheme, SchemeError> {
    let others = |i: usize| (0..=n).filter(move |&j| j != i);
    let charts: Vec<(String, Presentation)> = (0..=n)
        .map(|i| {
            let names: Vec<String> = others(i).map(|j| format!("x{j}/x{i}")).collect();
            (format!("U{i}"), Presentation::free(&names))
        })
        .collect();
    let mut overlaps = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let chart = &charts[i].1;
            let pivot = chart.index_of(&format!("x{j}/x{i}")).expect("chart coordinate");
            let monoid = chart.clone().with_inverted(&[format!("x{j}/x{i}")]).expect("known generator");
            let left_map = (0..n).map(|g| chart.unit(g)).collect();
            // x_k/x_j = (x_k/x_i)(x_j/x_i)^{-1}, and x_i/x_j = (x_j/x_i)^{-1}
            let right_map = others(j)
                .map(|k| {
                    let mut w = vec![0; n];
                    w[pivot] -= 1;
                    if k != i {
                        w[chart.index_of(&format!("x{k}/x{i}")).expect("chart coordinate")] += 1;
                    }
                    w
                })
                .collect();
            overlaps.push(Overlap { left: i, right: j, monoid, left_map, right_map });
        }
    }
    Scheme::glue(&charts, &overlaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(name: &str) -> Presentation {
        Presentation::free(&[name])
    }

    #[test]
    fn p1_by_hand() {
        let torus = Presentation::free(&["t"]).with_inverted(&["t"]).unwrap();
        let x = Scheme::glue(
            &[("A".into(), line("t")), ("B".into(), line("s"))],
            &[Overlap { left: 0, right: 1, monoid: torus, left_map: vec![vec![1]], right_map: vec![vec![-1]] }],
        )
        .unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x.space().maximal().len(), 2);
        let stalks: Vec<String> = (0..3).map(|i| x.stalk(i).to_string()).collect();
        assert_eq!(stalks, vec!["<t^±>", "<t>", "<s>"]);
        assert_eq!(x.costalk(0, 2).images, vec![vec![-1]]);
    }

    #[test]
    fn single_chart() {
        let m = Presentation::free(&["a", "b"]);
        let x = Scheme::glue(&[("U".into(), m.clone())], &[]).unwrap();
        assert!(x.space().isomorphism_to(Scheme::spec(&m).unwrap().space()).is_some());
    }

    #[test]
    fn projective_point() {
        let x = projective_space(0).unwrap();
        assert_eq!(x.len(), 1);
    }

    #[test]
    fn doubled_point_is_accepted() {
        let torus = Presentation::free(&["t"]).with_inverted(&["t"]).unwrap();
        let x = Scheme::glue(
            &[("A".into(), line("t")), ("B".into(), line("s"))],
            &[Overlap { left: 0, right: 1, monoid: torus, left_map: vec![vec![1]], right_map: vec![vec![1]] }],
        )
        .unwrap();
        assert_eq!(x.len(), 3);
        assert!(x.separated_certificate().is_ok());
    }

    #[test]
    fn non_localization_rejected() {
        // t ↦ t² does not identify Z with a localization of N
        let torus = Presentation::free(&["t"]).with_inverted(&["t"]).unwrap();
        let r = Scheme::glue(
            &[("A".into(), line("t")), ("B".into(), line("s"))],
            &[Overlap { left: 0, right: 1, monoid: torus, left_map: vec![vec![2]], right_map: vec![vec![1]] }],
        );
        assert!(matches!(r, Err(SchemeError::InconsistentGluing(_))));
    }

    #[test]
    fn projective_plane() {
        let p2 = projective_space(2).unwrap();
        assert_eq!(p2.len(), 7);
        assert_eq!(p2.space().maximal().len(), 3);
        assert_eq!(p2.dimension(), 2);
        let g = p2.space().least().unwrap();
        assert_eq!(p2.stalk(g).units::<i64>().group.to_string(), "Z^2");
        assert!(p2.separated_certificate().is_ok());
        assert!(p2.is_smooth().unwrap());
    }

    #[test]
    fn projective_3_space_point_count() {
        assert_eq!(projective_space(3).unwrap().len(), 15);
    }
}
