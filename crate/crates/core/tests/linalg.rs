mod common;

use monsch::abelian::{finite_limit, AbGroup, AbMap, Arrow, CochainComplex, SplitVerdict};
use monsch::linalg::{integer_kernel, smith_normal_form, Matrix};
use monsch::{Group, GroupMap, Int, IntMatrix};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    Matrix::from_fn(rows, cols, |i, j| Int::from(entries[i * cols + j]))
}

fn small_matrix(max: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-range..=range, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn is_diagonal_chain(s: &IntMatrix) -> bool {
    let (r, c) = s.shape();
    for i in 0..r {
        for j in 0..c {
            if i != j && !s[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let d: Vec<Int> = (0..r.min(c)).map(|i| s[(i, i)].clone()).collect();
    d.iter().all(|x| !x.is_negative())
        && d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() })
}

/// Finite group `Z^n / rows(m)` for a full-rank square `m`, enumerated inside
/// the box `[0, D)^n` with `D = |det m|`: returns the invariant factors.
fn brute_invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let det = Matrix::from_fn(n, n, |i, j| Int::from(m[i][j])).determinant();
    let d: i64 = i64::try_from(det.abs()).unwrap();
    assert!(d > 0);
    let encode = |v: &[i64]| v.iter().fold(0i64, |acc, x| acc * d + x.rem_euclid(d)) as usize;
    let size = (d as usize).pow(n as u32);
    // the image of the relation lattice in (Z/D)^n, by closure
    let mut in_l = vec![false; size];
    let mut stack = vec![vec![0i64; n]];
    in_l[0] = true;
    while let Some(v) = stack.pop() {
        for row in m {
            let w: Vec<i64> = v.iter().zip(row).map(|(a, b)| (a + b).rem_euclid(d)).collect();
            if !std::mem::replace(&mut in_l[encode(&w)], true) {
                stack.push(w);
            }
        }
    }
    let l_size = in_l.iter().filter(|&&b| b).count();
    let order = size / l_size;
    let decode = |mut k: usize| {
        let mut v = vec![0i64; n];
        for i in (0..n).rev() {
            v[i] = (k % d as usize) as i64;
            k /= d as usize;
        }
        v
    };
    // #{x ∈ G : kx = 0} for every k, compared against all divisor chains
    let killed = |k: i64| {
        (0..size).filter(|&x| in_l[encode(&decode(x).iter().map(|a| a * k).collect::<Vec<_>>())]).count() / l_size
    };
    let counts: Vec<usize> = (1..=order as i64).map(killed).collect();
    fn chains(rest: i64, min: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for f in min.max(2)..=rest {
            if rest % f == 0 && acc.last().is_none_or(|l| f % l == 0) {
                acc.push(f);
                chains(rest / f, f, acc, out);
                acc.pop();
            }
        }
    }
    let mut all = Vec::new();
    chains(order as i64, 2, &mut Vec::new(), &mut all);
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let matching: Vec<Vec<i64>> = all
        .into_iter()
        .filter(|c| (1..=order as i64).all(|k| c.iter().map(|&f| gcd(k, f) as usize).product::<usize>() == counts[k as usize - 1]))
        .collect();
    assert_eq!(matching.len(), 1, "invariant factors are determined by the kill counts");
    matching.into_iter().next().unwrap()
}

#[test]
fn smith_of_diag_2_3() {
    let m = matrix(2, 2, &[2, 0, 0, 3]);
    let s = smith_normal_form(&m);
    assert_eq!(s.diagonal(), vec![Int::from(1), Int::from(6)]);
    assert_eq!(brute_invariant_factors(&[vec![2, 0], vec![0, 3]]), vec![6]);
}

#[test]
fn group_of_4_6_matches_enumeration() {
    let g: Group = AbGroup::from_presentation(&matrix(2, 2, &[4, 0, 0, 6]));
    assert_eq!(g.to_string(), "Z/2 + Z/12");
    let brute = brute_invariant_factors(&[vec![4, 0], vec![0, 6]]);
    assert_eq!(brute, vec![2, 12]);
    assert_eq!(g.torsion(), brute.into_iter().map(Int::from).collect::<Vec<_>>());
}

#[test]
fn cospan_limit_is_the_index_two_sublattice() {
    let z: Group = AbGroup::free(1);
    let z2: Group = AbGroup::cyclic(Int::from(2));
    let red = AbMap::new(z.clone(), z2.clone(), matrix(1, 1, &[1])).unwrap();
    let arrows = vec![Arrow { from: 0, to: 2, map: red.clone() }, Arrow { from: 1, to: 2, map: red }];
    let lim = finite_limit(&[z.clone(), z.clone(), z2], &arrows).unwrap();
    assert_eq!(lim.group.to_string(), "Z^2");
    // the image in Z × Z: brute force over residues mod 2 and small coefficients
    let (p0, p1) = (&lim.projections[0], &lim.projections[1]);
    let gens: Vec<(i64, i64)> = (0..lim.group.ngens())
        .map(|k| {
            let e = lim.group.basis_element(k);
            (i64::try_from(p0.apply(&e)[0].clone()).unwrap(), i64::try_from(p1.apply(&e)[0].clone()).unwrap())
        })
        .collect();
    let mut hit = std::collections::HashSet::new();
    let coeffs: Vec<i64> = (-4..=4).collect();
    let mut stack = vec![(0usize, 0i64, 0i64)];
    while let Some((k, a, b)) = stack.pop() {
        if k == gens.len() {
            hit.insert((a, b));
            continue;
        }
        for &c in &coeffs {
            stack.push((k + 1, a + c * gens[k].0, b + c * gens[k].1));
        }
    }
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            assert_eq!(hit.contains(&(a, b)), (a - b) % 2 == 0, "({a}, {b})");
        }
    }
}

#[test]
fn reduction_mod_two_does_not_split() {
    let z: Group = AbGroup::free(1);
    let z2: Group = AbGroup::cyclic(Int::from(2));
    let f = AbMap::new(z.clone(), z2.clone(), matrix(1, 1, &[1])).unwrap();
    // every homomorphism Z/2 → Z sends the generator to some x with 2x = 0
    let homs: Vec<i64> = (-5..=5).filter(|x| 2 * x == 0).collect();
    assert_eq!(homs, vec![0]);
    assert!(homs.iter().all(|&x| {
        let s = AbMap::new(z2.clone(), z.clone(), matrix(1, 1, &[x])).unwrap();
        !f.compose(&s).equals(&AbMap::identity(&z2))
    }));
    assert!(f.is_surjective());
    assert!(matches!(f.split_epi(), SplitVerdict::NotSplit { .. }));
}

#[test]
fn two_chart_units_complex() {
    // (0 ⊕ 0) → Z, the units complex of the projective line
    let c0: Group = AbGroup::free(0);
    let c1: Group = AbGroup::free(1);
    let c = CochainComplex::new(vec![c0.clone(), c1.clone()], vec![AbMap::zero(&c0, &c1)]).unwrap();
    assert_eq!(c.cohomology(1).group.to_string(), "Z^1");
    assert!(c.cohomology(0).group.is_trivial());
}

fn random_group_presentation(rng: &mut rand_chacha::ChaCha8Rng) -> Group {
    let n = rng.gen_range(0..=3);
    let r = rng.gen_range(0..=2);
    AbGroup::new(n, Matrix::from_fn(r, n, |_, _| Int::from(rng.gen_range(-4i64..=4))))
}

/// A random well-defined map, found by rejection.
fn random_map(rng: &mut rand_chacha::ChaCha8Rng) -> GroupMap {
    loop {
        let (a, b) = (random_group_presentation(rng), random_group_presentation(rng));
        let m = Matrix::from_fn(b.ngens(), a.ngens(), |_, _| Int::from(rng.gen_range(-3i64..=3)));
        if let Ok(f) = AbMap::new(a, b, m) {
            return f;
        }
    }
}

fn unimodular(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = Matrix::identity(n);
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            u.add_row_multiple(a, b, &Int::from(rng.gen_range(-2i64..=2)));
        } else if rng.gen_bool(0.5) {
            u.negate_row(a);
        }
        let c = rng.gen_range(0..n);
        u.swap_rows(a, c);
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_round_trip(m in small_matrix(8, 20)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.s.clone());
        prop_assert!(is_diagonal_chain(&s.s));
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert_eq!(s.v.mul(&s.v_inv), Matrix::identity(m.ncols()));
    }

    #[test]
    fn group_invariant_under_unimodular_changes(m in small_matrix(5, 9), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g: Group = AbGroup::from_presentation(&m);
        let (u, v) = (unimodular(&mut rng, m.nrows()), unimodular(&mut rng, m.ncols()));
        let h: Group = AbGroup::from_presentation(&u.mul(&m).mul(&v));
        prop_assert_eq!(g.invariants(), h.invariants());
    }

    #[test]
    fn rank_nullity_and_first_isomorphism(seed in any::<u64>()) {
        let f = random_map(&mut common::rng(seed));
        let (k, inc) = f.kernel();
        let (im, _) = f.image();
        prop_assert_eq!(f.source().rank(), k.rank() + im.rank());
        prop_assert!(f.compose(&inc).is_zero());
        let (q, _) = inc.cokernel();
        prop_assert_eq!(q.invariants(), im.invariants());
        let (c, proj) = f.cokernel();
        prop_assert!(proj.is_surjective());
        prop_assert!(proj.compose(&f).is_zero());
        prop_assert_eq!(c.rank() + im.rank(), f.target().rank());
    }

    #[test]
    fn cone_of_identity_is_acyclic(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        // C⁰ → C¹ → C² with d₁ d₀ = 0, all free
        let (a, b, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let d0 = Matrix::from_fn(b, a, |_, _| Int::from(rng.gen_range(-3i64..=3)));
        let left = integer_kernel(&d0.transpose()).transpose();
        let d1 = Matrix::from_fn(c, left.nrows(), |_, _| Int::from(rng.gen_range(-3i64..=3))).mul(&left);
        let dims = [a, b, c];
        let d = [d0, d1];
        // cone^n = C^{n+1} ⊕ C^n, d(x, y) = (−d x, x + d y), for n = −1..2
        let dim = |n: i64| -> (usize, usize) {
            let get = |k: i64| if (0..3).contains(&k) { dims[k as usize] } else { 0 };
            (get(n + 1), get(n))
        };
        let mut groups = Vec::new();
        let mut maps = Vec::new();
        for n in -1i64..=2 {
            let (x, y) = dim(n);
            groups.push(AbGroup::free(x + y));
        }
        for (k, n) in (-1i64..=1).enumerate() {
            let (sx, sy) = dim(n);
            let (tx, ty) = dim(n + 1);
            let mut m = Matrix::zeros(tx + ty, sx + sy);
            if tx > 0 && sx > 0 {
                m.set_block(0, 0, &d[(n + 1) as usize].neg());
            }
            if ty > 0 && sx > 0 {
                m.set_block(tx, 0, &Matrix::identity(sx));
            }
            if ty > 0 && sy > 0 && n >= 0 {
                m.set_block(tx, sx, &d[n as usize]);
            }
            maps.push(AbMap::new(groups[k].clone(), groups[k + 1].clone(), m).unwrap());
        }
        let cone = CochainComplex::new(groups, maps).unwrap();
        for i in 0..cone.len() {
            prop_assert!(cone.cohomology(i).group.is_trivial(), "H^{} of the cone", i);
        }
    }

    #[test]
    fn discrete_limit_is_product(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let k = rng.gen_range(1..=4);
        let objs: Vec<Group> = (0..k).map(|_| common::random_group(&mut rng)).collect();
        let lim = finite_limit(&objs, &[]).unwrap();
        prop_assert_eq!(lim.group.invariants(), AbGroup::direct_sum(&objs).invariants());
        for (p, o) in lim.projections.iter().zip(&objs) {
            prop_assert!(p.target().is_isomorphic(o));
            prop_assert!(p.is_surjective());
        }
    }

    #[test]
    fn split_certificates_compose_to_identity(seed in any::<u64>()) {
        let f = random_map(&mut common::rng(seed));
        match f.split_epi() {
            SplitVerdict::Split { section } => {
                prop_assert!(f.compose(&section).equals(&AbMap::identity(f.target())));
            }
            SplitVerdict::NotSurjective { missed } => {
                prop_assert!(f.preimage(&missed).is_none());
                prop_assert!(!f.is_surjective());
            }
            SplitVerdict::NotSplit { .. } => prop_assert!(f.is_surjective()),
        }
    }
}
