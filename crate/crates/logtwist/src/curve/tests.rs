use super::*;
use crate::lattice::rat;

fn two_to_one(first: bool) -> (MarkedDualGraph, GltStructure) {
    let g = GraphBuilder::new()
        .vertex("C", 0)
        .point("s", "C", &[1, 2])
        .point("t", "C", &[3])
        .build()
        .unwrap();
    let mut glt = GltStructure::untwisted(&g);
    let orders = if first { [2, 1] } else { [1, 2] };
    glt.stalks.insert("s".into(), AdmissibleMonoid::free(&orders));
    (g, glt)
}

#[test]
fn genus_examples() {
    let g = GraphBuilder::new().vertex("v", 1).build().unwrap();
    assert_eq!(g.genus(), 1);
    let g = GraphBuilder::new()
        .vertex("a", 0)
        .vertex("b", 0)
        .edge("e", "a", "b")
        .edge("f", "a", "b")
        .build()
        .unwrap();
    assert_eq!(g.genus(), 1);
    let g = GraphBuilder::new().vertex("a", 2).edge("l", "a", "a").build().unwrap();
    assert_eq!(g.genus(), 3);
    assert_eq!(g.valence("a"), 2);
}

#[test]
fn validation_rejects_constructed_violations() {
    let on_node = GraphBuilder::new()
        .vertex("a", 0)
        .vertex("b", 0)
        .edge("e", "a", "b")
        .point("p", "e", &[1])
        .build();
    assert_eq!(
        on_node,
        Err(GraphError::MarkingOnNode {
            point: "p".into(),
            edge: "e".into()
        })
    );
    let disconnected = GraphBuilder::new().vertex("a", 0).vertex("b", 0).build();
    assert_eq!(disconnected, Err(GraphError::Disconnected("b".into())));
    let heavy = GraphBuilder::new()
        .vertex("a", 1)
        .point("p", "a", &[1, 2])
        .weights(vec![rat(2, 3), rat(1, 2)])
        .build();
    assert!(matches!(heavy, Err(GraphError::WeightOverflow { .. })));
    let missing = GraphBuilder::new()
        .vertex("a", 1)
        .point("p", "a", &[2])
        .markings(2)
        .build();
    assert_eq!(missing, Err(GraphError::MarkingMissing(1)));
    let repeated = GraphBuilder::new()
        .vertex("a", 1)
        .point("p", "a", &[1])
        .point("q", "a", &[1])
        .build();
    assert_eq!(repeated, Err(GraphError::MarkingRepeated(1)));
    let dup = GraphBuilder::new().vertex("a", 1).vertex("a", 0).build();
    assert_eq!(dup, Err(GraphError::DuplicateId("a".into())));
    let pruned = GraphBuilder::new().vertex("a", 1).point("p", "a", &[]).build().unwrap();
    assert!(pruned.points().is_empty());
}

#[test]
fn stability_examples() {
    let g = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("e", "A", "P")
        .point("p", "P", &[1])
        .point("q", "P", &[2])
        .weights(vec![rat(1, 2), rat(2, 5)])
        .build()
        .unwrap();
    let r = is_stable(&g, &MapDecoration::all(&g)).unwrap();
    assert_eq!(r.violators, vec!["P".to_string()]);
    let g1 = GraphBuilder::new().vertex("A", 1).weights(vec![]).build().unwrap();
    assert!(is_stable(&g1, &MapDecoration::all(&g1)).unwrap().stable);
    let g3 = GraphBuilder::new()
        .vertex("P", 0)
        .vertex("A", 1)
        .vertex("B", 1)
        .vertex("C", 1)
        .edge("a", "P", "A")
        .edge("b", "P", "B")
        .edge("c", "P", "C")
        .weights(vec![])
        .build()
        .unwrap();
    assert!(is_stable(&g3, &MapDecoration::all(&g3)).unwrap().stable);
    let unweighted = GraphBuilder::new().vertex("A", 1).build().unwrap();
    assert_eq!(
        is_stable(&unweighted, &MapDecoration::all(&unweighted)),
        Err(GraphError::MissingWeights)
    );
}

#[test]
fn stabilizers_and_charts() {
    let g = GraphBuilder::new()
        .vertex("a", 0)
        .vertex("b", 1)
        .edge("e", "a", "b")
        .point("p", "a", &[1, 2])
        .build()
        .unwrap();
    let mut glt = GltStructure::untwisted(&g);
    assert_eq!(validate_glt(&g, &glt), Ok(()));
    assert!(point_stabilizer(&g, &glt, "p").unwrap().is_trivial());
    assert!(edge_stabilizer(&g, &glt, "e").unwrap().is_trivial());
    assert!(local_chart(&g, &glt, "p").unwrap().is_trivial());
    let diag = AdmissibleMonoid::new(2, &[vec![rat(1, 2), rat(1, 2)]]).unwrap();
    glt.stalks.insert("p".into(), diag.clone());
    glt.node_index.insert("e".into(), 3);
    assert_eq!(point_stabilizer(&g, &glt, "p").unwrap().invariant_factors(), &[2]);
    assert_eq!(edge_stabilizer(&g, &glt, "e").unwrap().invariant_factors(), &[3]);
    assert_eq!(
        local_chart(&g, &glt, "p").unwrap(),
        LocalChart::Point {
            markings: vec![1, 2],
            monoid: diag,
            group: FiniteAbelianGroup::cyclic(2)
        }
    );
    assert_eq!(
        local_chart(&g, &glt, "e").unwrap(),
        LocalChart::Node {
            index: 3,
            weights: (1, 2)
        }
    );
    assert!(point_stabilizer(&g, &glt, "zz").is_err());
    glt.stalks.insert("p".into(), AdmissibleMonoid::free(&[2]));
    assert!(matches!(validate_glt(&g, &glt), Err(GltViolation::StalkRank { .. })));
}

#[test]
fn two_to_one_structures() {
    let (g1, t1) = two_to_one(true);
    let (g2, t2) = two_to_one(false);
    assert_eq!(point_stabilizer(&g1, &t1, "s").unwrap().invariant_factors(), &[2]);
    assert_eq!(point_stabilizer(&g2, &t2, "s").unwrap().invariant_factors(), &[2]);
    assert!(is_isomorphic((&g1, &t1), (&g2, &t2)).is_none());
    let id = is_isomorphic((&g1, &t1), (&g1, &t1)).unwrap();
    assert!(id.vertices.iter().all(|(a, b)| a == b));
}

#[test]
fn relabeled_copy_is_isomorphic() {
    let g = GraphBuilder::new()
        .vertex("a", 0)
        .vertex("b", 1)
        .vertex("c", 0)
        .edge("e1", "a", "b")
        .edge("e2", "b", "c")
        .edge("e3", "c", "a")
        .edge("e4", "a", "a")
        .point("p", "a", &[1])
        .point("q", "c", &[2, 3])
        .build()
        .unwrap();
    let h = GraphBuilder::new()
        .vertex("x", 0)
        .vertex("y", 0)
        .vertex("z", 1)
        .edge("f1", "z", "y")
        .edge("f2", "x", "y")
        .edge("f3", "z", "x")
        .edge("f4", "y", "y")
        .point("P", "y", &[1])
        .point("Q", "x", &[2, 3])
        .build()
        .unwrap();
    let mut tg = GltStructure::untwisted(&g);
    let mut th = GltStructure::untwisted(&h);
    tg.node_index.insert("e2".into(), 2);
    th.node_index.insert("f3".into(), 2);
    let iso = is_isomorphic((&g, &tg), (&h, &th)).unwrap();
    assert_eq!(iso.vertices["a"], "y");
    assert_eq!(iso.edges["e2"], "f3");
    assert_eq!(iso.points["q"], "Q");
    th.node_index.insert("f3".into(), 3);
    assert!(is_isomorphic((&g, &tg), (&h, &th)).is_none());
}
