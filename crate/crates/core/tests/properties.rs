use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Pow;
use proptest::prelude::*;
use sumfree_core::caps::count_complete_caps;
use sumfree_core::certified::{self, BoundValue};
use sumfree_core::group::abelian_groups_of_order;
use sumfree_core::loopgraph::{EdgeKind, LoopGraph, LoopKind};
use sumfree_core::mis::{count_mis, count_mis_bruteforce, enumerate_mis, fixture};
use sumfree_core::sumfree::{
    count, count_fmax, count_sumfree, enumerate_maximal_sumfree, is_distinct_sumfree, is_maximal_sumfree, is_sumfree,
    mu_bruteforce, mu_star_bruteforce, Quantity, SearchConfig,
};
use sumfree_core::{Budget, ElementSet, GroupSpec, GroupType};

fn orders(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=12, 1..=4).prop_filter("order bound", move |o| o.iter().product::<usize>() <= max_n)
}

fn group(max_n: usize) -> impl Strategy<Value = GroupSpec> {
    orders(max_n).prop_map(|o| GroupSpec::new(&o).unwrap())
}

fn graph(max_v: usize) -> impl Strategy<Value = LoopGraph> {
    (1..=max_v)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0u8..4, n * (n - 1) / 2),
                prop::collection::vec(0u8..8, n),
            )
        })
        .prop_map(|(n, pairs, loops)| {
            let mut g = LoopGraph::new(n);
            let mut it = pairs.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    match it.next().unwrap() {
                        1 => g.add_edge(u, v, EdgeKind::TYPE1),
                        2 => g.add_edge(u, v, EdgeKind::TYPE2),
                        3 => g.add_edge(u, v, EdgeKind::TYPE1 | EdgeKind::TYPE2),
                        _ => {}
                    }
                }
            }
            for (v, l) in loops.into_iter().enumerate() {
                match l {
                    0 => g.add_loop(v, LoopKind::BAD),
                    1 => g.add_loop(v, LoopKind::TYPE2),
                    _ => {}
                }
            }
            g
        })
}

fn smallest_prime_factor_2_mod_3(n: usize) -> Option<usize> {
    (2..=n)
        .filter(|p| n.is_multiple_of(*p) && (2..*p).all(|d| p % d != 0))
        .find(|p| p % 3 == 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negation_and_index_round_trip(g in group(400)) {
        for x in 0..g.order() {
            prop_assert_eq!(g.add_idx(x, g.neg_idx(x)), 0);
            prop_assert_eq!(g.encode(&g.decode(x)).unwrap(), x);
        }
    }

    #[test]
    fn classification_is_exclusive(o in prop::collection::vec(2usize..=100, 1..=3)
        .prop_filter("order bound", |o| o.iter().product::<usize>() <= 10_000)) {
        let g = GroupSpec::new(&o).unwrap();
        let n = g.order();
        let want = match smallest_prime_factor_2_mod_3(n) {
            Some(p) => GroupType::TypeI(p as u64),
            None if n.is_multiple_of(3) => GroupType::TypeII,
            None => GroupType::TypeIII,
        };
        prop_assert_eq!(g.classify(), want);
    }

    #[test]
    fn sumfree_implies_distinct_sumfree(g in group(64), seed in any::<u64>()) {
        let n = g.order();
        let mask = if n == 64 { seed } else { seed & ((1u64 << n) - 1) };
        // thin the set out so that sum-free samples are common
        let sparse = mask & mask.rotate_left(7) & mask.rotate_left(19);
        let a = ElementSet::from_mask(n, sparse);
        if is_sumfree(&g, &a) {
            prop_assert!(is_distinct_sumfree(&g, &a));
        }
    }

    #[test]
    fn mu_at_most_mu_star(g in group(20)) {
        prop_assert!(mu_bruteforce(&g).unwrap().value <= mu_star_bruteforce(&g).unwrap().value);
    }

    #[test]
    fn enumerated_sets_are_maximal_and_unique(g in group(20)) {
        let sets = enumerate_maximal_sumfree(&g).unwrap();
        prop_assert!(sets.iter().all(|a| is_maximal_sumfree(&g, a)));
        prop_assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mis_counters_agree(gr in graph(14)) {
        let fast = count_mis(&gr).unwrap().count;
        let listed = enumerate_mis(&gr, &Budget::default()).unwrap().len();
        let brute = count_mis_bruteforce(&gr).unwrap();
        prop_assert_eq!(&fast, &BigUint::from(brute));
        prop_assert_eq!(listed as u64, brute);
    }

    #[test]
    fn mis_multiplies_over_disjoint_unions(a in graph(8), b in graph(8)) {
        let u = LoopGraph::disjoint_union(&[a.clone(), b.clone()]);
        let prod = count_mis(&a).unwrap().count * count_mis(&b).unwrap().count;
        prop_assert_eq!(BigUint::from(count_mis_bruteforce(&u).unwrap()), prod);
    }

    #[test]
    fn adjacency_text_round_trip(gr in graph(12)) {
        let back = LoopGraph::parse_adjacency_text(&gr.to_adjacency_text()).unwrap();
        prop_assert_eq!(back.to_adjacency_text(), gr.to_adjacency_text());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), gr.edges().collect::<Vec<_>>());
        prop_assert_eq!(back.loops().collect::<Vec<_>>(), gr.loops().collect::<Vec<_>>());
    }

    #[test]
    fn powers_are_enclosed(base in 2i64..=7, p in -40i64..=40, q in 1i64..=12) {
        // base^(p/q) lies in [lo, hi]  iff  lo^q <= base^p <= hi^q
        let v = certified::pow(&certified::int(base), &BigRational::new(p.into(), q.into()), 64);
        let (lo, hi) = (v.lower(), v.upper());
        prop_assert!(lo <= hi);
        let exact = Pow::pow(BigRational::from_integer(base.into()), p as i32);
        prop_assert!(Pow::pow(lo, q as u32) <= exact);
        prop_assert!(exact <= Pow::pow(hi, q as u32));
    }
}

#[test]
fn isomorphic_specs_agree() {
    for (a, b) in [
        (vec![2, 6], vec![2, 2, 3]),
        (vec![6], vec![2, 3]),
        (vec![12], vec![3, 4]),
    ] {
        let (ga, gb) = (GroupSpec::new(&a).unwrap(), GroupSpec::new(&b).unwrap());
        for q in [
            Quantity::F,
            Quantity::FMax,
            Quantity::FStarMax,
            Quantity::Mu,
            Quantity::MuStar,
        ] {
            let cfg = SearchConfig::default();
            assert_eq!(
                count(&ga, q, &cfg).unwrap().value,
                count(&gb, q, &cfg).unwrap().value,
                "{a:?} {b:?} {q:?}"
            );
        }
    }
}

#[test]
fn sumfree_count_at_most_distinct_count() {
    for n in 2..=16 {
        for g in abelian_groups_of_order(n) {
            let f = count_sumfree(&g).unwrap().value;
            let fstar = count(&g, Quantity::FStar, &SearchConfig::default()).unwrap().value;
            assert!(f <= fstar, "{g}");
        }
    }
}

#[test]
fn hyperplane_counts() {
    for (p, k) in [(2, 1), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2)] {
        let g = GroupSpec::elementary(p, k).unwrap();
        let hs = g.hyperplanes().unwrap();
        assert_eq!(hs.len(), (p.pow(k as u32) - 1) / (p - 1));
        assert!(hs
            .iter()
            .all(|h| h.subgroup.len() == p.pow(k as u32 - 1) && g.is_subgroup(&h.subgroup)));
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                assert_ne!(hs[i].subgroup, hs[j].subgroup);
            }
        }
    }
}

#[test]
fn perfect_matchings_attain_the_triangle_free_bound() {
    for t in 0..=8usize {
        let g = fixture(&format!("matching:{t}")).unwrap();
        assert_eq!(count_mis(&g).unwrap().count, BigUint::from(1u32) << t);
    }
}

#[test]
fn caps_match_fmax_up_to_pg4() {
    for k in 1..=4 {
        let fmax = count_fmax(&GroupSpec::elementary(2, k + 1).unwrap()).unwrap().value;
        assert_eq!(count_complete_caps(k).unwrap(), fmax, "k = {k}");
    }
}

#[test]
fn integer_exponents_are_exact() {
    let v: BoundValue = certified::pow(&certified::int(6), &BigRational::from_integer(5.into()), 32);
    assert_eq!(v.as_integer(), Some(BigUint::from(7776u32)));
    let w = certified::pow(&certified::int(4), &BigRational::new(3.into(), 2.into()), 32);
    let eight = BigRational::from_integer(8.into());
    assert!(!w.is_exact() && w.lower() <= eight && eight <= w.upper());
}
