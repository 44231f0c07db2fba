use std::collections::BTreeMap;

use logtwist::admissible::AdmissibleMonoid;
use logtwist::contraction::{
    char_maps, compose_char_maps, contract, greedy_factorization, initial_contraction, is_glt_contraction,
    picard_kernel, relative_coarse, stabilize, stabilize_with_order, ContractionPlan, PicardTree,
};
use logtwist::curve::{is_stable, GltStructure};
use logtwist::lattice::Rational;
use logtwist::random;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn contraction_preserves_genus_and_factors(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let inst = random::tree_instance(&mut rng, 6, 4);
        let direct = contract(&inst.plan).unwrap();
        prop_assert_eq!(direct.target.genus(), inst.graph.genus());
        let steps = greedy_factorization(&inst.plan).unwrap();
        let mut current = inst.graph.clone();
        let mut maps = None;
        for s in &steps {
            prop_assert_eq!(s.source(), &current);
            let c = contract(s).unwrap();
            prop_assert_eq!(c.target.genus(), current.genus());
            current = c.target;
            let m = char_maps(s).unwrap();
            maps = Some(match maps {
                None => m,
                Some(prev) => compose_char_maps(&prev, &m).unwrap(),
            });
        }
        prop_assert_eq!(&current, &direct.target);
        if let Some(composed) = maps {
            let all = char_maps(&inst.plan).unwrap();
            prop_assert!(composed.base.agrees_up_to_loop_orientation(&all.base));
            prop_assert!(composed.chart.agrees_up_to_loop_orientation(&all.chart));
        }
    }

    #[test]
    fn stabilization_is_stable_and_confluent(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::weighted_graph(&mut rng, 7, 5);
        let d = random::decoration(&mut rng, &g, 0.7);
        let first = stabilize(&g, &d);
        for _ in 0..10 {
            let other = stabilize_with_order(&g, &d, |v| rng.gen_range(0..v.len()));
            match (&first, &other) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(&a.plan, &b.plan);
                    prop_assert_eq!(&a.contraction.target, &b.contraction.target);
                }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "orders disagree on feasibility"),
            }
        }
        if let Ok(s) = first {
            prop_assert!(is_stable(&s.contraction.target, &s.decoration).unwrap().stable);
            prop_assert_eq!(s.contraction.target.genus(), g.genus());
        }
    }

    #[test]
    fn initial_contraction_is_a_contraction(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let inst = random::tree_instance(&mut rng, 5, 3);
        let glt = random::glt_structure(&mut rng, &inst.graph, 6, 6);
        let init = initial_contraction(&glt, &inst.plan).unwrap();
        prop_assert!(is_glt_contraction(&glt, &inst.plan, &init.glt).unwrap().valid);
        let same = initial_contraction(&glt, &ContractionPlan::identity(&inst.graph)).unwrap();
        prop_assert_eq!(same.glt, glt.clone());
        // shrinking a target node index to a divisor keeps validity
        let mut coarser = init.glt.clone();
        for x in coarser.node_index.values_mut() {
            *x = 1;
        }
        prop_assert!(is_glt_contraction(&glt, &inst.plan, &coarser).unwrap().valid);
        let floor = GltStructure::untwisted(&init.contraction.target);
        let mut floor_nodes = floor.clone();
        floor_nodes.node_index = coarser.node_index.clone();
        prop_assert!(is_glt_contraction(&glt, &inst.plan, &floor_nodes).unwrap().valid);
    }

    #[test]
    fn nested_relative_coarse_composes(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::weighted_graph(&mut rng, 5, 4);
        let glt = random::glt_structure(&mut rng, &g, 6, 6);
        let mut outer = BTreeMap::new();
        let mut inner = BTreeMap::new();
        for (p, m) in &glt.stalks {
            let elems = element_multiples(m);
            let a: Vec<Vec<Rational>> = (0..2).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
            let b: Vec<Vec<Rational>> = vec![scale(&a[0], rng.gen_range(0..3))];
            outer.insert(p.clone(), a);
            inner.insert(p.clone(), b);
        }
        let mut d_outer = BTreeMap::new();
        let mut d_inner = BTreeMap::new();
        for (e, &c) in &glt.node_index {
            let divs: Vec<u64> = (1..=c).filter(|d| c % d == 0).collect();
            let d1 = divs[rng.gen_range(0..divs.len())];
            let sub: Vec<u64> = (1..=d1).filter(|d| d1 % d == 0).collect();
            d_outer.insert(e.clone(), d1);
            d_inner.insert(e.clone(), sub[rng.gen_range(0..sub.len())]);
        }
        let once = relative_coarse(&g, &glt, &inner, &d_inner).unwrap();
        let mid = relative_coarse(&g, &glt, &outer, &d_outer).unwrap();
        let twice = relative_coarse(&g, &mid, &inner, &d_inner).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(is_glt_contraction(&glt, &ContractionPlan::identity(&g), &once).unwrap().valid);
    }
}

fn scale(v: &[Rational], k: i64) -> Vec<Rational> {
    v.iter().map(|x| x * Rational::from_integer(BigInt::from(k))).collect()
}

/// The given generators of the stalk group plus zero, as candidate subgroup generators.
fn element_multiples(m: &AdmissibleMonoid) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::zero(); m.rank()]];
    out.extend(m.group().representatives());
    out.push(vec![Rational::one(); m.rank()]);
    out
}

#[test]
fn picard_trees_up_to_six_vertices() {
    for (n, edges) in random::unlabeled_trees(6) {
        for root in 0..n {
            for marking in 0..n {
                let k = picard_kernel(&PicardTree {
                    vertices: n,
                    edges: edges.clone(),
                    root,
                    marking,
                })
                .unwrap();
                assert_eq!(k.verify(), Ok(()), "tree {edges:?} root {root} marking {marking}");
            }
        }
    }
}

#[test]
fn unlabeled_tree_counts() {
    let mut counts = [0usize; 8];
    for (n, _) in random::unlabeled_trees(7) {
        counts[n] += 1;
    }
    assert_eq!(&counts[1..], &[1, 1, 1, 2, 3, 6, 11]);
}
