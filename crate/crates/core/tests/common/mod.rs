//! Shared corpus and seeded generators for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use monsch::abelian::AbGroup;
use monsch::invariants::{BundleCocycle, Transition};
use monsch::linalg::{integer_kernel, solve_integer, Matrix};
use monsch::monoid::Presentation;
use monsch::poset::FinitePoset;
use monsch::scheme::{projective_space, Overlap, Scheme};
use monsch::sheaf::AbSheaf;
use monsch::{Group, Int};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn n() -> Presentation {
    Presentation::free(&["t"])
}

pub fn n2() -> Presentation {
    Presentation::free(&["x", "y"])
}

pub fn z() -> Presentation {
    Presentation::free(&["t"]).with_inverted(&["t"]).unwrap()
}

pub fn n_times_z() -> Presentation {
    Presentation::free(&["x", "t"]).with_inverted(&["t"]).unwrap()
}

/// `⟨a,b,e | ab = abe, e² = e⟩`
pub fn example() -> Presentation {
    Presentation::free(&["a", "b", "e"]).relation("a b", "a b e").unwrap().relation("e^2", "e").unwrap()
}

/// `⟨u,a,b | u² = ab = u³⟩`
pub fn uab() -> Presentation {
    Presentation::free(&["u", "a", "b"]).relation("u^2", "a b").unwrap().relation("a b", "u^3").unwrap()
}

/// `⟨a1..an, e | a1⋯an = a1⋯an e, e² = e⟩`
pub fn mn(n: usize) -> Presentation {
    let mut names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    names.push("e".into());
    let prod = names[..n].join(" ");
    Presentation::free(&names).relation(&prod, &format!("{prod} e")).unwrap().relation("e^2", "e").unwrap()
}

/// `⟨t², t³⟩ ⊂ N`
pub fn cusp() -> Presentation {
    Presentation::free(&["x", "y"]).relation("x^3", "y^2").unwrap()
}

/// `⟨a,b,c | ab = ac⟩`, not s-cancellative.
pub fn abac() -> Presentation {
    Presentation::free(&["a", "b", "c"]).relation("a b", "a c").unwrap()
}

/// Monoids whose spectra make up the affine part of the corpus.
pub fn monoid_corpus() -> Vec<(&'static str, Presentation)> {
    vec![
        ("trivial", Presentation::trivial()),
        ("N", n()),
        ("N2", n2()),
        ("Z", z()),
        ("NxZ", n_times_z()),
        ("example", example()),
        ("uab", uab()),
        ("M2", mn(2)),
        ("M3", mn(3)),
        ("cusp", cusp()),
        ("abac", abac()),
    ]
}

/// Two copies of `N` glued along `Z` by `t ↦ t^sign`.
pub fn two_lines(sign: i64) -> Scheme {
    let torus = z();
    Scheme::glue(
        &[("A".into(), Presentation::free(&["t"])), ("B".into(), Presentation::free(&["s"]))],
        &[Overlap { left: 0, right: 1, monoid: torus, left_map: vec![vec![1]], right_map: vec![vec![sign]] }],
    )
    .unwrap()
}

/// `A¹ × P¹`.
pub fn line_times_p1() -> Scheme {
    Scheme::spec(&n()).unwrap().product(&projective_space(1).unwrap()).unwrap()
}

/// Connected separated schemes of the corpus.
pub fn scheme_corpus() -> Vec<(String, Scheme)> {
    let mut out: Vec<(String, Scheme)> = monoid_corpus()
        .into_iter()
        .map(|(name, m)| (format!("Spec {name}"), Scheme::spec(&m).unwrap()))
        .collect();
    out.push(("P1".into(), projective_space(1).unwrap()));
    out.push(("P2".into(), projective_space(2).unwrap()));
    out.push(("P1xP1".into(), projective_space(1).unwrap().product(&projective_space(1).unwrap()).unwrap()));
    out.push(("doubled point".into(), two_lines(1)));
    out.push(("A1xP1".into(), line_times_p1()));
    out
}

pub fn random_group(rng: &mut ChaCha8Rng) -> Group {
    let choices = [0i64, 0, 0, 2, 3, 4, 6];
    let k = rng.gen_range(0..=2);
    let parts: Vec<Group> = (0..k).map(|_| AbGroup::cyclic(Int::from(*choices.choose(rng).unwrap()))).collect();
    AbGroup::direct_sum(&parts)
}

fn random_vector(rng: &mut ChaCha8Rng, r: usize) -> Vec<Int> {
    (0..r).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect()
}

/// `F_x = Z^r / S_x` with `S_x` spanned by vectors attached to the points
/// above `x`; restrictions are the identity on `Z^r`.
pub fn quotient_sheaf(rng: &mut ChaCha8Rng, base: &FinitePoset) -> AbSheaf<Int> {
    let r = rng.gen_range(1..=3);
    let gens: Vec<Vec<Int>> = (0..base.len())
        .map(|_| if rng.gen_bool(0.5) { random_vector(rng, r) } else { vec![Int::from(0); r] })
        .collect();
    let stalks: Vec<Group> = (0..base.len())
        .map(|x| AbGroup::new(r, Matrix::from_rows(r, base.up_set(x).iter().map(|&y| gens[y].clone()).collect())))
        .collect();
    let maps: Vec<_> = base.covers().iter().map(|&c| (c, Matrix::identity(r))).collect();
    AbSheaf::new(base.clone(), stalks, maps).unwrap()
}

/// `F_x ⊆ Z^r` spanned by vectors attached to the points above `x`;
/// restrictions are inclusions.
pub fn subgroup_sheaf(rng: &mut ChaCha8Rng, base: &FinitePoset) -> AbSheaf<Int> {
    let r = rng.gen_range(1..=3);
    let gens: Vec<Vec<Int>> = (0..base.len()).map(|_| random_vector(rng, r)).collect();
    let ups: Vec<Vec<usize>> = (0..base.len()).map(|x| base.up_set(x)).collect();
    let stalks: Vec<Group> = ups
        .iter()
        .map(|up| {
            let span = Matrix::from_cols(r, up.iter().map(|&y| gens[y].clone()).collect());
            let rels = integer_kernel(&span).transpose();
            AbGroup::new(up.len(), rels)
        })
        .collect();
    let maps: Vec<_> = base
        .covers()
        .iter()
        .map(|&(x, y)| {
            let m = Matrix::from_fn(ups[x].len(), ups[y].len(), |i, j| Int::from((ups[x][i] == ups[y][j]) as i64));
            ((x, y), m)
        })
        .collect();
    AbSheaf::new(base.clone(), stalks, maps).unwrap()
}

/// One of the generator families, chosen by the seed stream.
pub fn random_sheaf(rng: &mut ChaCha8Rng, base: &FinitePoset) -> AbSheaf<Int> {
    match rng.gen_range(0..6) {
        0 => quotient_sheaf(rng, base),
        1 => subgroup_sheaf(rng, base),
        2 => {
            let p = rng.gen_range(0..base.len());
            AbSheaf::skyscraper(base, p, &random_group(rng))
        }
        3 => AbSheaf::constant(base, &random_group(rng)),
        4 => {
            let collection: Vec<Group> = (0..base.len()).map(|_| random_group(rng)).collect();
            AbSheaf::generated_by(base, &collection)
        }
        _ => {
            let a = quotient_sheaf(rng, base);
            a.direct_sum(&subgroup_sheaf(rng, base))
        }
    }
}

/// Presentations with at most 3 generators and 2 relations of degree ≤ 3,
/// drawn from a seeded stream; duplicates removed.
pub fn small_presentations(seed: u64, count: usize) -> Vec<Presentation> {
    let mut r = rng(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let names = ["a", "b", "c"];
    while out.len() < count {
        let k = r.gen_range(1..=3);
        let nrel = r.gen_range(1..=2);
        let mut rels = Vec::new();
        for _ in 0..nrel {
            let mut side = || {
                let d = r.gen_range(1..=3);
                let mut w = vec![0i64; k];
                for _ in 0..d {
                    w[r.gen_range(0..k)] += 1;
                }
                w
            };
            let (l, rr) = (side(), side());
            if l != rr {
                let (l, rr) = if l < rr { (l, rr) } else { (rr, l) };
                rels.push((l, rr));
            }
        }
        rels.sort();
        rels.dedup();
        if rels.is_empty() || !seen.insert((k, rels.clone())) {
            continue;
        }
        let mut p = Presentation::free(&names[..k]);
        for (l, rr) in rels {
            p.push_relation(l, rr).unwrap();
        }
        out.push(p);
    }
    out
}

/// Layout of reduced Čech 1-cochains of the units sheaf: pairs of positions
/// in `maximal()`, lexicographic, with the size of the unit group there.
pub fn pair_layout(x: &Scheme, units: &AbSheaf<Int>) -> HashMap<(usize, usize), (usize, usize, usize)> {
    let maxima = x.space().maximal();
    let mut out = HashMap::new();
    let mut off = 0;
    for a in 0..maxima.len() {
        for b in a + 1..maxima.len() {
            if let Some(t) = x.space().intersection_top(&[maxima[a], maxima[b]]).unwrap() {
                let n = units.stalk(t).ngens();
                out.insert((a, b), (off, n, t));
                off += n;
            }
        }
    }
    out
}

/// Random Čech 1-cocycles of the units sheaf.
pub fn random_lines(rng: &mut ChaCha8Rng, x: &Scheme, count: usize) -> Vec<Vec<Int>> {
    let cech = x.units_sheaf::<Int>().reduced_cech().unwrap();
    let len = cech.group(1).unwrap().ngens();
    let basis = match cech.differential(1) {
        Some(d) => integer_kernel(d.matrix()),
        None => Matrix::identity(len),
    };
    (0..count)
        .map(|_| {
            let coeffs: Vec<Int> = (0..basis.ncols()).map(|_| Int::from(rng.gen_range(-2i64..=2))).collect();
            basis.mul_vec(&coeffs)
        })
        .collect()
}

pub struct Seeded<'a> {
    pub cocycle: BundleCocycle<'a, Int>,
    pub lines: Vec<Vec<Int>>,
}

/// `g_ij = a_i R_ij a_j⁻¹` with `R` diagonal on the given lines and `a_i`
/// random elements of `(O*)ⁿ ⋊ Σₙ` over each chart.
pub fn seeded_bundle<'a>(rng: &mut ChaCha8Rng, x: &'a Scheme, rank: usize) -> Seeded<'a> {
    let units = x.units_sheaf::<Int>();
    let layout = pair_layout(x, &units);
    let lines = random_lines(rng, x, rank);
    let maxima = x.space().maximal();
    let gauge: Vec<Transition<Int>> = maxima
        .iter()
        .map(|&c| {
            let mut perm: Vec<usize> = (0..rank).collect();
            perm.shuffle(rng);
            let n = units.stalk(c).ngens();
            let d = (0..rank).map(|_| (0..n).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect()).collect();
            Transition { units: d, perm }
        })
        .collect();
    let mut transitions = HashMap::new();
    for i in 0..maxima.len() {
        for j in 0..maxima.len() {
            if i == j {
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            let Some(&(off, n, t)) = layout.get(&(a, b)) else { continue };
            let r = Transition::diagonal(
                lines
                    .iter()
                    .map(|l| l[off..off + n].iter().map(|v| if i < j { v.clone() } else { -v.clone() }).collect())
                    .collect(),
            );
            let ai = gauge[i].restrict(units.restriction(t, maxima[i]));
            let aj = gauge[j].restrict(units.restriction(t, maxima[j]));
            transitions.insert((i, j), ai.mul(&r).mul(&aj.inverse()));
        }
    }
    Seeded { cocycle: BundleCocycle { scheme: x, charts: maxima, rank, transitions }, lines }
}

/// Relabels charts by `sigma` and conjugates coordinates by `pi`.
pub fn relabel<'a>(c: &BundleCocycle<'a, Int>, sigma: &[usize], pi: &[usize]) -> BundleCocycle<'a, Int> {
    let charts = sigma.iter().map(|&s| c.charts[s]).collect();
    let at = |i: usize| c.scheme.space().maximal().iter().position(|&m| m == c.charts[i]).unwrap();
    let units = c.scheme.units_sheaf::<Int>();
    let mut transitions = HashMap::new();
    for i in 0..sigma.len() {
        for j in 0..sigma.len() {
            let Some(g) = c.transitions.get(&(sigma[i], sigma[j])) else { continue };
            let t = c.scheme.space().intersection_top(&[c.charts[at(sigma[i])], c.charts[at(sigma[j])]]).unwrap().unwrap();
            let p = Transition { units: vec![units.stalk(t).zero_element(); c.rank], perm: pi.to_vec() };
            transitions.insert((i, j), p.mul(g).mul(&p.inverse()));
        }
    }
    BundleCocycle { scheme: c.scheme, charts, rank: c.rank, transitions }
}

/// Matches every input line to a distinct certificate representative
/// differing from it by a Čech coboundary.
pub fn lines_match(x: &Scheme, lines: &[Vec<Int>], reps: &[Vec<Int>]) -> bool {
    let cech = x.units_sheaf::<Int>().reduced_cech().unwrap();
    let d0 = cech.differential(0).map(|d| d.matrix().clone());
    let cohomologous = |a: &[Int], b: &[Int]| {
        let diff: Vec<Int> = a.iter().zip(b).map(|(u, v)| u - v).collect();
        match &d0 {
            Some(m) => solve_integer(m, &diff).is_some(),
            None => diff.iter().all(|v| *v == Int::from(0)),
        }
    };
    let mut used = vec![false; reps.len()];
    lines.iter().all(|l| match (0..reps.len()).find(|&k| !used[k] && cohomologous(l, &reps[k])) {
        Some(k) => {
            used[k] = true;
            true
        }
        None => false,
    })
}
