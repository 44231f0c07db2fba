use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::*;
use crate::admissible::AdmissibleMonoid;
use crate::curve::{GltStructure, GraphBuilder, MapDecoration, MarkedDualGraph};
use crate::lattice::{rat, FiniteAbelianGroup};
use crate::local::LocalMonoid;

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn bridge_graph() -> MarkedDualGraph {
    GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .vertex("B", 1)
        .edge("AP", "A", "P")
        .edge("PB", "P", "B")
        .build()
        .unwrap()
}

fn tail_graph() -> MarkedDualGraph {
    GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("AP", "A", "P")
        .point("s", "P", &[1])
        .build()
        .unwrap()
}

fn branch(edge: &str, slot: usize, vertex: &str) -> Generator {
    Generator::Branch {
        edge: edge.into(),
        slot,
        vertex: vertex.into(),
    }
}

fn terms(pairs: &[(Generator, i64)]) -> Vec<(Generator, BigInt)> {
    let mut v: Vec<(Generator, BigInt)> = pairs.iter().map(|(g, x)| (g.clone(), BigInt::from(*x))).collect();
    v.sort();
    v
}

fn sorted(mut v: Vec<(Generator, BigInt)>) -> Vec<(Generator, BigInt)> {
    v.sort();
    v
}

#[test]
fn identity_plan() {
    let g = bridge_graph();
    let c = contract(&ContractionPlan::identity(&g)).unwrap();
    assert_eq!(c.target, g);
}

#[test]
fn bridge_contraction_and_charts() {
    let g = bridge_graph();
    let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
    let c = contract(&plan).unwrap();
    assert_eq!(c.target.vertices().len(), 2);
    assert_eq!(c.target.edges().len(), 1);
    assert_eq!(c.target.edges()["AP"].ends, ["A".to_string(), "B".to_string()]);
    assert_eq!(c.target.genus(), g.genus());
    let maps = char_maps(&plan).unwrap();
    assert_eq!(
        sorted(maps.base.image_terms(&Generator::Node("AP".into())).unwrap()),
        terms(&[(Generator::Node("AP".into()), 1), (Generator::Node("PB".into()), 1)])
    );
    assert_eq!(
        sorted(maps.chart.image_terms(&branch("AP", 0, "A")).unwrap()),
        terms(&[(branch("AP", 0, "A"), 1), (branch("PB", 0, "P"), 1)])
    );
    assert_eq!(
        sorted(maps.chart.image_terms(&branch("AP", 1, "B")).unwrap()),
        terms(&[(branch("AP", 1, "P"), 1), (branch("PB", 1, "B"), 1)])
    );
}

#[test]
fn tail_contraction_and_charts() {
    let g = tail_graph();
    let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
    let c = contract(&plan).unwrap();
    assert_eq!(c.target.vertices().len(), 1);
    assert_eq!(c.target.points()["s"].vertex, "A");
    let maps = char_maps(&plan).unwrap();
    assert_eq!(
        sorted(maps.chart.image_terms(&Generator::Marking(1)).unwrap()),
        terms(&[(branch("AP", 1, "P"), 1), (Generator::Marking(1), 1)])
    );
}

#[test]
fn invalid_plans() {
    let g = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .vertex("Q", 0)
        .vertex("B", 1)
        .edge("a", "A", "P")
        .edge("b", "P", "Q")
        .edge("c", "Q", "P")
        .edge("d", "Q", "B")
        .edge("e", "P", "B")
        .point("m", "P", &[1])
        .build()
        .unwrap();
    assert_eq!(
        ContractionPlan::new(&g, set(&["A"])),
        Err(ContractionError::PositiveGenus("A".into()))
    );
    assert_eq!(
        ContractionPlan::new(&g, set(&["P", "Q"])),
        Err(ContractionError::NotATree("P".into()))
    );
    assert!(matches!(
        ContractionPlan::new(&g, set(&["P"])),
        Err(ContractionError::AttachmentCount { .. })
    ));
    let marked_bridge = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("a", "A", "P")
        .edge("b", "P", "A")
        .point("m", "P", &[1])
        .build()
        .unwrap();
    assert_eq!(
        ContractionPlan::new(&marked_bridge, set(&["P"])),
        Err(ContractionError::MarkedBridge("P".into()))
    );
    let heavy = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("a", "A", "P")
        .point("m", "P", &[1])
        .point("n", "P", &[2])
        .weights(vec![rat(2, 3), rat(2, 3)])
        .build()
        .unwrap();
    assert!(matches!(
        ContractionPlan::new(&heavy, set(&["P"])),
        Err(ContractionError::WeightOverflow { .. })
    ));
    let single = GraphBuilder::new().vertex("P", 0).build().unwrap();
    assert_eq!(
        ContractionPlan::new(&single, set(&["P"])),
        Err(ContractionError::CollapsesEverything)
    );
}

#[test]
fn chain_factorization() {
    let g = GraphBuilder::new()
        .vertex("E", 1)
        .vertex("P1", 0)
        .vertex("P2", 0)
        .vertex("P3", 0)
        .edge("e1", "E", "P1")
        .edge("e2", "P1", "P2")
        .edge("e3", "P2", "P3")
        .point("s", "P3", &[1])
        .build()
        .unwrap();
    let plan = ContractionPlan::new(&g, set(&["P1", "P2", "P3"])).unwrap();
    let steps = greedy_factorization(&plan).unwrap();
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[0].collapsed(), &set(&["P3"]));
    let mut cur = g.clone();
    for s in &steps {
        assert_eq!(s.source(), &cur);
        cur = contract(s).unwrap().target;
    }
    assert_eq!(cur, contract(&plan).unwrap().target);
    let mut composed = char_maps(&steps[0]).unwrap();
    for s in &steps[1..] {
        composed = compose_char_maps(&composed, &char_maps(s).unwrap()).unwrap();
    }
    let direct = char_maps(&plan).unwrap();
    assert_eq!(composed, direct);
    assert_eq!(
        sorted(direct.chart.image_terms(&Generator::Marking(1)).unwrap()),
        terms(&[
            (branch("e1", 1, "P1"), 1),
            (branch("e2", 1, "P2"), 1),
            (branch("e3", 1, "P3"), 1),
            (Generator::Marking(1), 1)
        ])
    );
}

#[test]
fn bridge_only_is_one_step() {
    let g = bridge_graph();
    let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
    assert_eq!(greedy_factorization(&plan).unwrap().len(), 1);
    assert!(greedy_factorization(&ContractionPlan::identity(&g)).unwrap().is_empty());
}

#[test]
fn stabilization_examples() {
    let g = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("e", "A", "P")
        .point("p", "P", &[1])
        .point("q", "P", &[2])
        .weights(vec![rat(1, 2), rat(2, 5)])
        .build()
        .unwrap();
    let s = stabilize(&g, &MapDecoration::all(&g)).unwrap();
    assert_eq!(s.order, vec!["P".to_string()]);
    assert_eq!(s.contraction.target.points()["p"].markings, vec![1, 2]);
    let stable = GraphBuilder::new()
        .vertex("A", 1)
        .point("p", "A", &[1])
        .weights(vec![rat(1, 2)])
        .build()
        .unwrap();
    let s = stabilize(&stable, &MapDecoration::all(&stable)).unwrap();
    assert!(s.plan.is_identity());
}

#[test]
fn picard_single_vertex() {
    let k = picard_kernel(&PicardTree {
        vertices: 1,
        edges: vec![],
        root: 0,
        marking: 0,
    })
    .unwrap();
    assert_eq!(k.verify(), Ok(()));
    let expect: Vec<BigInt> = [0, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(k.w_prime, expect);
}

#[test]
fn picard_two_vertex_chain() {
    let k = picard_kernel(&PicardTree {
        vertices: 2,
        edges: vec![(0, 1)],
        root: 0,
        marking: 1,
    })
    .unwrap();
    assert_eq!(k.verify(), Ok(()));
    let minus_terms = [PicardGenerator::T0Minus, PicardGenerator::TMinus(0)];
    for (g, x) in k.generators.iter().zip(&k.w_prime) {
        let expect = i64::from(minus_terms.contains(g) || *g == PicardGenerator::W);
        assert_eq!(*x, BigInt::from(expect), "{g}");
    }
    assert!(picard_kernel(&PicardTree {
        vertices: 2,
        edges: vec![],
        root: 0,
        marking: 1
    })
    .is_err());
}

#[test]
fn picard_from_plan() {
    let g = tail_graph();
    let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
    let k = picard_kernel_for_marking(&plan, 1).unwrap();
    assert_eq!(k.verify(), Ok(()));
}

fn chain_with_indices(c1: u64, c2: u64) -> (MarkedDualGraph, GltStructure) {
    let g = bridge_graph();
    let mut glt = GltStructure::untwisted(&g);
    glt.node_index.insert("AP".into(), c1);
    glt.node_index.insert("PB".into(), c2);
    (g, glt)
}

#[test]
fn initial_node_index_is_gcd() {
    let (g, glt) = chain_with_indices(4, 6);
    let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
    let init = initial_contraction(&glt, &plan).unwrap();
    assert_eq!(init.glt.node_index["AP"], 2);
    assert!(is_glt_contraction(&glt, &plan, &init.glt).unwrap().valid);
    let mut too_big = init.glt.clone();
    too_big.node_index.insert("AP".into(), 4);
    assert!(!is_glt_contraction(&glt, &plan, &too_big).unwrap().valid);
}

#[test]
fn initial_tail_stalks() {
    let g = tail_graph();
    for (c, expect) in [(3u64, 1u64), (2, 2)] {
        let mut glt = GltStructure::untwisted(&g);
        glt.stalks.insert("s".into(), AdmissibleMonoid::free(&[2]));
        glt.node_index.insert("AP".into(), c);
        let plan = ContractionPlan::new(&g, set(&["P"])).unwrap();
        let init = initial_contraction(&glt, &plan).unwrap();
        assert_eq!(init.glt.stalks["s"], AdmissibleMonoid::free(&[expect]));
    }
    let mut glt = GltStructure::untwisted(&g);
    glt.stalks.insert("s".into(), AdmissibleMonoid::free(&[3]));
    let init = initial_contraction(&glt, &ContractionPlan::identity(&g)).unwrap();
    assert_eq!(init.glt, glt);
}

#[test]
fn contraction_check_over_identity() {
    let g = GraphBuilder::new()
        .vertex("C", 0)
        .point("x", "C", &[1])
        .point("y", "C", &[2])
        .point("z", "C", &[3])
        .build()
        .unwrap();
    let plan = ContractionPlan::identity(&g);
    let with = |a: u64| {
        let mut glt = GltStructure::untwisted(&g);
        glt.stalks.insert("x".into(), AdmissibleMonoid::free(&[a]));
        glt
    };
    assert!(is_glt_contraction(&with(4), &plan, &with(2)).unwrap().valid);
    assert!(!is_glt_contraction(&with(2), &plan, &with(4)).unwrap().valid);
    assert!(!is_glt_contraction(&with(2), &plan, &with(3)).unwrap().valid);
}

#[test]
fn relative_coarse_examples() {
    let g = GraphBuilder::new()
        .vertex("C", 0)
        .vertex("D", 1)
        .edge("e", "C", "D")
        .point("x", "C", &[1])
        .point("y", "C", &[2, 3])
        .build()
        .unwrap();
    let mut glt = GltStructure::untwisted(&g);
    glt.stalks.insert("x".into(), AdmissibleMonoid::free(&[4]));
    glt.stalks.insert(
        "y".into(),
        AdmissibleMonoid::new(2, &[vec![rat(1, 2), rat(1, 2)]]).unwrap(),
    );
    glt.node_index.insert("e".into(), 6);
    let unchanged = relative_coarse(&g, &glt, &BTreeMap::new(), &BTreeMap::new()).unwrap();
    assert_eq!(unchanged, glt);
    let subs = BTreeMap::from([("x".to_string(), vec![vec![rat(1, 2)]]), ("y".to_string(), vec![])]);
    let divs = BTreeMap::from([("e".to_string(), 3u64)]);
    let out = relative_coarse(&g, &glt, &subs, &divs).unwrap();
    assert_eq!(out.stalks["x"], AdmissibleMonoid::free(&[2]));
    assert_eq!(out.stalks["y"], AdmissibleMonoid::free_integral(2));
    assert_eq!(out.node_index["e"], 3);
    assert!(
        is_glt_contraction(&glt, &ContractionPlan::identity(&g), &out)
            .unwrap()
            .valid
    );
    let bad = BTreeMap::from([("x".to_string(), vec![vec![rat(1, 3)]])]);
    assert_eq!(
        relative_coarse(&g, &glt, &bad, &BTreeMap::new()),
        Err(ContractionError::NotASubgroup("x".into()))
    );
    let bad_div = BTreeMap::from([("e".to_string(), 4u64)]);
    assert!(matches!(
        relative_coarse(&g, &glt, &BTreeMap::new(), &bad_div),
        Err(ContractionError::NotADivisor { .. })
    ));
}

#[test]
fn counting_examples() {
    let z2 = FiniteAbelianGroup::cyclic(2);
    let d = LocalMonoid::from_upper_triangle(z2.clone(), &[1]).unwrap();
    let r = count_structures(&z2, 2, &d, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(r.predicted, BigInt::from(2));
    assert!(r.verified);
    let exact = r.exact_realizations.unwrap();
    assert_eq!(exact.len(), 2);
    assert!(exact.contains(&AdmissibleMonoid::free(&[2, 1])));
    assert!(exact.contains(&AdmissibleMonoid::free(&[1, 2])));
    let r1 = count_structures(&z2, 1, &d, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(r1.predicted, BigInt::from(1));
    let z3 = FiniteAbelianGroup::cyclic(3);
    let d3 = LocalMonoid::from_upper_triangle(z3.clone(), &[1, 2, 1]).unwrap();
    let r3 = count_structures(&z3, 2, &d3, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(r3.enumerated, Some(BigInt::from(3)));
    assert!(r3.verified);
    assert!(count_structures(&z3, 2, &d, DEFAULT_ENUMERATION_CAP).is_err());
}
