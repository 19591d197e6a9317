mod common;

use std::sync::OnceLock;

use monsch::abelian::AbGroup;
use monsch::poset::FinitePoset;
use monsch::scheme::projective_space;
use monsch::sheaf::{AbSheaf, CohomologyModel, Flasqueness};
use monsch::{Group, Int};
use proptest::prelude::*;
use rand::Rng;

fn posets() -> &'static [(String, FinitePoset)] {
    static CELL: OnceLock<Vec<(String, FinitePoset)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut v: Vec<(String, FinitePoset)> =
            common::scheme_corpus().into_iter().map(|(n, x)| (n, x.space().clone())).collect();
        v.push(("chain 4".into(), FinitePoset::chain(4)));
        v
    })
}

/// Dense cohomology of a model, every degree the complex has.
fn dense(f: &AbSheaf<Int>, model: CohomologyModel) -> Vec<Group> {
    let c = f.complex(model).unwrap();
    (0..c.len()).map(|i| c.cohomology(i).group).collect()
}

fn group(f: &[Group], i: usize) -> String {
    f.get(i).map(|g| g.to_string()).unwrap_or_else(|| "0".into())
}

#[test]
fn meets() {
    let p1 = projective_space(1).unwrap();
    let s = p1.space();
    assert!(s.is_meet_semilattice());
    // brute force: every pair has a greatest common lower bound
    for x in 0..s.len() {
        for y in 0..s.len() {
            let lower: Vec<usize> = (0..s.len()).filter(|&z| s.leq(z, x) && s.leq(z, y)).collect();
            let glb = lower.iter().copied().find(|&z| lower.iter().all(|&w| s.leq(w, z)));
            assert_eq!(glb, s.meet(x, y));
        }
    }
    let d = monsch::scheme::Scheme::spec(&common::n2()).unwrap();
    let mids: Vec<usize> = (0..4).filter(|&x| d.space().height(x) == 1).collect();
    assert_eq!(d.space().meet(mids[0], mids[1]), d.space().least());
    let chain = FinitePoset::chain(2);
    assert_eq!(chain.down_set(1), vec![0, 1]);
}

#[test]
fn global_units_of_the_line_vanish() {
    let x = projective_space(1).unwrap();
    let u = x.units_sheaf::<Int>();
    let stalks: Vec<String> = u.stalks().iter().map(|g| g.to_string()).collect();
    let g = x.space().least().unwrap();
    for (p, s) in stalks.iter().enumerate() {
        assert_eq!(s, if p == g { "Z^1" } else { "0" });
    }
    assert!(u.global_sections().group.is_trivial());
    let order = u.order_cochain();
    assert_eq!(order.group(0).unwrap().to_string(), "Z^1");
    assert_eq!(order.group(1).unwrap().to_string(), "Z^2");
    assert_eq!(order.cohomology(1).group.to_string(), "Z^1");
    assert_eq!(u.reduced_cech().unwrap().cohomology(1).group.to_string(), "Z^1");
}

#[test]
fn projective_plane_units_complex() {
    let u = projective_space(2).unwrap().units_sheaf::<Int>();
    let c = u.reduced_cech().unwrap();
    let shapes: Vec<String> = (0..c.len()).map(|i| c.group(i).unwrap().to_string()).collect();
    assert_eq!(shapes, vec!["0", "Z^3", "Z^2"]);
    // the 3 × 2 map has rank 2 and trivial cokernel
    let d1 = c.differential(1).unwrap();
    assert!(d1.is_surjective());
    assert_eq!(c.cohomology(1).group.to_string(), "Z^1");
    assert!(c.cohomology(2).group.is_trivial());
}

#[test]
fn skyscrapers_at_the_generic_point_of_the_line() {
    let s = projective_space(1).unwrap().space().clone();
    let g = s.least().unwrap();
    for (d, expect) in [(0, "Z^1"), (2, "Z/2")] {
        let f = AbSheaf::skyscraper(&s, g, &AbGroup::cyclic(Int::from(d)));
        assert_eq!(f.cohomology(1).to_string(), expect);
        assert_eq!(group(&dense(&f, CohomologyModel::ReducedCech), 1), expect);
        assert!(!f.is_s_flasque().holds());
    }
}

#[test]
fn constant_sheaf_on_the_diamond() {
    let d = monsch::scheme::Scheme::spec(&common::n2()).unwrap();
    let f = AbSheaf::<Int>::constant(d.space(), &AbGroup::free(1));
    match f.is_s_flasque() {
        Flasqueness::SFlasque(c) => {
            let least = d.space().least().unwrap();
            for x in 0..4 {
                assert_eq!(c.group(x).is_trivial(), x != least, "collection at {}", d.space().label(x));
            }
        }
        Flasqueness::NotSFlasque { point, .. } => panic!("fails at {point}"),
    }
}

#[test]
fn products_of_s_flasque_sheaves() {
    let mut rng = common::rng(5);
    let (a, b) = (&posets()[6].1, &posets()[11].1);
    for _ in 0..4 {
        let ca: Vec<Group> = (0..a.len()).map(|_| common::random_group(&mut rng)).collect();
        let cb: Vec<Group> = (0..b.len()).map(|_| common::random_group(&mut rng)).collect();
        let (fa, fb) = (AbSheaf::generated_by(a, &ca), AbSheaf::generated_by(b, &cb));
        assert!(fa.is_s_flasque().holds() && fb.is_s_flasque().holds());
        assert!(fa.product(&fb).is_s_flasque().holds());
    }
}

fn pick(seed: u64, k: usize) -> (&'static FinitePoset, AbSheaf<Int>) {
    let base = &posets()[k % posets().len()].1;
    let f = common::random_sheaf(&mut common::rng(seed), base);
    (base, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn models_agree(seed in any::<u64>(), k in 0usize..64) {
        let (base, f) = pick(seed, k);
        prop_assume!(f.has_separated_base());
        let order = f.cohomology_groups(CohomologyModel::OrderCochain).unwrap();
        let cech = dense(&f, CohomologyModel::ReducedCech);
        let sparse = f.cohomology_groups(CohomologyModel::ReducedCech).unwrap();
        // the dense order complex is only affordable on small bases
        let dense_order = if base.len() <= 7 { Some(dense(&f, CohomologyModel::OrderCochain)) } else { None };
        for i in 0..order.len().max(cech.len()) {
            prop_assert_eq!(group(&order, i), group(&cech, i), "degree {} on {:?}", i, base.labels());
            prop_assert_eq!(group(&order, i), group(&sparse, i));
            if let Some(d) = &dense_order {
                prop_assert_eq!(group(&order, i), group(d, i));
            }
        }
    }

    #[test]
    fn affine_vanishing(seed in any::<u64>(), k in 0usize..64) {
        let (base, f) = pick(seed, k);
        prop_assume!(base.greatest().is_some());
        for (i, h) in f.cohomology_groups(CohomologyModel::OrderCochain).unwrap().iter().enumerate().skip(1) {
            prop_assert!(h.is_trivial(), "H^{} = {}", i, h);
        }
    }

    #[test]
    fn constant_sheaves_vanish(k in 0usize..64, which in 0usize..3) {
        let base = &posets()[k % posets().len()].1;
        prop_assume!(base.is_connected() && base.is_meet_semilattice());
        let a: Group = [AbGroup::free(1), AbGroup::cyclic(Int::from(2)), AbGroup::free(2)][which].clone();
        let f = AbSheaf::constant(base, &a);
        let h = f.cohomology_groups(CohomologyModel::OrderCochain).unwrap();
        prop_assert!(h[0].is_isomorphic(&a));
        for g in h.iter().skip(1) {
            prop_assert!(g.is_trivial());
        }
    }

    #[test]
    fn nothing_above_dimension(seed in any::<u64>(), k in 0usize..64) {
        let (base, f) = pick(seed, k);
        prop_assume!(f.has_separated_base());
        let cech = dense(&f, CohomologyModel::ReducedCech);
        for (i, h) in cech.iter().enumerate().skip(base.dimension() + 1) {
            prop_assert!(h.is_trivial(), "H^{} = {} above dimension {}", i, h, base.dimension());
        }
    }

    #[test]
    fn s_flasque_sheaves_are_acyclic_and_split(seed in any::<u64>(), k in 0usize..64) {
        let (base, mut f) = pick(seed, k);
        let mut rng = common::rng(seed ^ 0x5eed);
        if rng.gen_bool(0.5) {
            let c: Vec<Group> = (0..base.len()).map(|_| common::random_group(&mut rng)).collect();
            f = AbSheaf::generated_by(base, &c);
        }
        let verdict = f.is_s_flasque();
        // locality: the verdict is the conjunction over the chart down-sets
        let local = base.maximal().iter().all(|&m| f.restrict_to(&base.down_set(m)).unwrap().is_s_flasque().holds());
        prop_assert_eq!(verdict.holds(), local);
        prop_assume!(verdict.holds());
        for x in 0..base.len() {
            prop_assert!(f.restrict_to(&base.down_set(x)).unwrap().is_s_flasque().holds());
        }
        for (i, h) in f.cohomology_groups(CohomologyModel::OrderCochain).unwrap().iter().enumerate().skip(1) {
            prop_assert!(h.is_trivial(), "H^{} = {}", i, h);
        }
        let opens = base.opens();
        for _ in 0..12 {
            let v = &opens[rng.gen_range(0..opens.len())];
            let smaller: Vec<&Vec<usize>> = opens.iter().filter(|u| u.iter().all(|p| v.contains(p))).collect();
            let u = smaller[rng.gen_range(0..smaller.len())];
            let (su, sv) = (f.sections(u).unwrap(), f.sections(v).unwrap());
            let r = f.restrict_sections(u, &su, v, &sv).unwrap();
            prop_assert!(r.split_epi().is_split(), "F({:?}) → F({:?})", v, u);
        }
    }
}
