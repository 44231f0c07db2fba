use std::collections::BTreeMap;

use logtwist::curve::{is_isomorphic, GltStructure, GraphBuilder, MarkedDualGraph};
use logtwist::random;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Renames every vertex, edge and point id by a random permutation of fresh names.
fn relabel(rng: &mut impl Rng, g: &MarkedDualGraph, t: &GltStructure, prefix: &str) -> (MarkedDualGraph, GltStructure) {
    let mut names: Vec<usize> = (0..g.vertices().len()).collect();
    names.shuffle(rng);
    let vmap: BTreeMap<&String, String> = g
        .vertices()
        .keys()
        .zip(&names)
        .map(|(v, k)| (v, format!("{prefix}v{k}")))
        .collect();
    let mut b = GraphBuilder::new();
    for (v, x) in g.vertices() {
        b = b.vertex(&vmap[v], x.genus);
    }
    let mut node_index = BTreeMap::new();
    for (k, (e, x)) in g.edges().iter().enumerate() {
        let id = format!("{prefix}e{k}");
        let (a, c) = if rng.gen_bool(0.5) {
            (&x.ends[0], &x.ends[1])
        } else {
            (&x.ends[1], &x.ends[0])
        };
        b = b.edge(&id, &vmap[a], &vmap[c]);
        node_index.insert(id, t.node_index[e]);
    }
    let mut stalks = BTreeMap::new();
    for (k, (p, x)) in g.points().iter().enumerate() {
        let id = format!("{prefix}p{k}");
        b = b.point(&id, &vmap[&x.vertex], &x.markings);
        stalks.insert(id, t.stalks[p].clone());
    }
    if let Some(w) = g.weights() {
        b = b.weights(w.to_vec());
    }
    (
        b.markings(g.marking_count()).build().unwrap(),
        GltStructure { node_index, stalks },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn isomorphism_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::weighted_graph(&mut rng, 6, 4);
        let t = random::glt_structure(&mut rng, &g, 4, 4);
        prop_assert!(is_isomorphic((&g, &t), (&g, &t)).is_some());
        let (h, u) = relabel(&mut rng, &g, &t, "a");
        let (k, w) = relabel(&mut rng, &h, &u, "b");
        prop_assert!(is_isomorphic((&g, &t), (&h, &u)).is_some());
        prop_assert!(is_isomorphic((&h, &u), (&g, &t)).is_some());
        prop_assert!(is_isomorphic((&h, &u), (&k, &w)).is_some());
        prop_assert!(is_isomorphic((&g, &t), (&k, &w)).is_some());
    }

    #[test]
    fn changed_node_index_breaks_isomorphism(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let g = random::weighted_graph(&mut rng, 6, 4);
        prop_assume!(!g.edges().is_empty());
        let t = GltStructure::untwisted(&g);
        let mut u = t.clone();
        let e = g.edges().keys().next().unwrap().clone();
        u.node_index.insert(e, 2);
        prop_assert!(is_isomorphic((&g, &t), (&g, &u)).is_none());
    }
}
