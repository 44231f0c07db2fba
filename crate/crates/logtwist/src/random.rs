//! Seeded generators of random instances for property checks.
//!
//! Every generator draws only from the supplied RNG, so a seed fixes the instance.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissible::AdmissibleMonoid;
use crate::contraction::ContractionPlan;
use crate::curve::{is_of_stable_type, GltStructure, GraphBuilder, MapDecoration, MarkedDualGraph};
use crate::lattice::{rat, FiniteAbelianGroup, Rational};
use crate::local::LocalMonoid;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank in `1..=max_rank`, up to three generators, each with one common denominator `≤ max_den`.
pub fn admissible_generators(rng: &mut impl Rng, max_rank: usize, max_den: i64) -> (usize, Vec<Vec<Rational>>) {
    let n = rng.gen_range(1..=max_rank);
    let count = rng.gen_range(0..=3);
    let gens = (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=max_den);
            (0..n).map(|_| rat(rng.gen_range(0..q), q)).collect()
        })
        .collect();
    (n, gens)
}

pub fn admissible_monoid(rng: &mut impl Rng, max_rank: usize, max_den: i64) -> AdmissibleMonoid {
    let (n, gens) = admissible_generators(rng, max_rank, max_den);
    AdmissibleMonoid::new(n, &gens).expect("generators have the drawn rank")
}

/// A valid local monoid on `group` with carries in `0..=max_carry`, by rejection sampling.
pub fn local_monoid(rng: &mut impl Rng, group: &FiniteAbelianGroup, max_carry: u64) -> LocalMonoid {
    let m = group.order() as usize - 1;
    loop {
        let values: Vec<u64> = (0..m * (m + 1) / 2).map(|_| rng.gen_range(0..=max_carry)).collect();
        if let Ok(d) = LocalMonoid::from_upper_triangle(group.clone(), &values) {
            if d.validate().is_ok() {
                return d;
            }
        }
    }
}

fn random_weight(rng: &mut impl Rng) -> Rational {
    let q = rng.gen_range(1..=6);
    rat(rng.gen_range(1..=q), q)
}

/// Connected weighted graph of stable type with at most `max_vertices` vertices and `max_markings` markings.
pub fn weighted_graph(rng: &mut impl Rng, max_vertices: usize, max_markings: usize) -> MarkedDualGraph {
    loop {
        let nv = rng.gen_range(1..=max_vertices);
        let mut b = GraphBuilder::new();
        for i in 0..nv {
            let genus = if rng.gen_bool(0.65) { 0 } else { rng.gen_range(1..=2) };
            b = b.vertex(&format!("v{i}"), genus);
        }
        let mut ne = 0;
        for i in 1..nv {
            let j = rng.gen_range(0..i);
            b = b.edge(&format!("e{ne}"), &format!("v{j}"), &format!("v{i}"));
            ne += 1;
        }
        for _ in 0..rng.gen_range(0..=1) {
            let (x, y) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            b = b.edge(&format!("e{ne}"), &format!("v{x}"), &format!("v{y}"));
            ne += 1;
        }
        let n = rng.gen_range(0..=max_markings);
        for i in 1..=n {
            b = b.point(&format!("p{i}"), &format!("v{}", rng.gen_range(0..nv)), &[i]);
        }
        let weights = (0..n).map(|_| random_weight(rng)).collect();
        let Ok(g) = b.markings(n).weights(weights).build() else {
            continue;
        };
        if is_of_stable_type(&g).unwrap_or(false) {
            return g;
        }
    }
}

/// Each vertex contracted with probability `p`.
pub fn decoration(rng: &mut impl Rng, g: &MarkedDualGraph, p: f64) -> MapDecoration {
    MapDecoration {
        contracted: g.vertices().keys().filter(|_| rng.gen_bool(p)).cloned().collect(),
    }
}

/// A graph built around a core of positive-genus vertices with genus-0 tails and bridges
/// attached, together with the plan collapsing every genus-0 vertex.
#[derive(Clone, Debug)]
pub struct TreeInstance {
    pub graph: MarkedDualGraph,
    pub plan: ContractionPlan,
}

/// `max_collapsed` bounds the genus-0 vertices; markings sit only on tails.
pub fn tree_instance(rng: &mut impl Rng, max_collapsed: usize, max_markings: usize) -> TreeInstance {
    loop {
        let core = rng.gen_range(1..=2);
        let mut b = GraphBuilder::new();
        let mut edges = 0;
        let mut edge = |b: GraphBuilder, x: &str, y: &str| {
            edges += 1;
            b.edge(&format!("e{edges}"), x, y)
        };
        for i in 0..core {
            b = b.vertex(&format!("c{i}"), 1);
        }
        let linked = core == 1 || rng.gen_bool(0.5);
        if core == 2 && linked {
            b = edge(b, "c0", "c1");
        }
        let mut need_bridge = core == 2 && (!linked || rng.gen_bool(0.5));
        let budget = rng.gen_range(1..=max_collapsed);
        let mut used = 0;
        let mut tails: Vec<Vec<String>> = Vec::new();
        while used < budget {
            let size = rng.gen_range(1..=budget - used);
            let names: Vec<String> = (used..used + size).map(|k| format!("r{k}")).collect();
            for v in &names {
                b = b.vertex(v, 0);
            }
            for k in 1..size {
                let parent = names[rng.gen_range(0..k)].clone();
                b = edge(b, &parent, &names[k]);
            }
            let inner = names.choose(rng).expect("nonempty").clone();
            if need_bridge {
                let other = names.choose(rng).expect("nonempty").clone();
                b = edge(b, "c0", &inner);
                b = edge(b, &other, "c1");
                need_bridge = false;
            } else {
                let anchor = format!("c{}", rng.gen_range(0..core));
                b = edge(b, &anchor, &inner);
                tails.push(names);
            }
            used += size;
        }
        let n = if tails.is_empty() {
            0
        } else {
            rng.gen_range(0..=max_markings)
        };
        let mut next_point = 0;
        let mut placed = 0;
        while placed < n {
            let tail = tails.choose(rng).expect("tails exist");
            let v = tail.choose(rng).expect("nonempty").clone();
            let k = rng.gen_range(1..=(n - placed).min(2));
            let markings: Vec<usize> = (placed + 1..=placed + k).collect();
            next_point += 1;
            b = b.point(&format!("p{next_point}"), &v, &markings);
            placed += k;
        }
        let Ok(g) = b.markings(n).build() else { continue };
        let collapsed: BTreeSet<String> = g
            .vertices()
            .iter()
            .filter(|(_, v)| v.genus == 0)
            .map(|(id, _)| id.clone())
            .collect();
        if let Ok(plan) = ContractionPlan::new(&g, collapsed) {
            return TreeInstance { graph: g, plan };
        }
    }
}

/// Random twisting data on `g`: node indices in `1..=max_index`, stalks with denominators `≤ max_den`.
pub fn glt_structure(rng: &mut impl Rng, g: &MarkedDualGraph, max_index: u64, max_den: i64) -> GltStructure {
    let node_index: BTreeMap<String, u64> = g
        .edges()
        .keys()
        .map(|e| (e.clone(), rng.gen_range(1..=max_index)))
        .collect();
    let stalks = g
        .points()
        .iter()
        .map(|(id, p)| {
            let k = p.markings.len();
            let gens: Vec<Vec<Rational>> = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let q = rng.gen_range(1..=max_den);
                    (0..k).map(|_| rat(rng.gen_range(0..q), q)).collect()
                })
                .collect();
            (id.clone(), AdmissibleMonoid::new(k, &gens).expect("rank matches"))
        })
        .collect();
    GltStructure { node_index, stalks }
}

/// Every tree on at most `max_vertices` vertices up to isomorphism, as edge lists on `0..n`.
pub fn unlabeled_trees(max_vertices: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = vec![(1, vec![])];
    if max_vertices >= 2 {
        out.push((2, vec![(0, 1)]));
    }
    for n in 3..=max_vertices {
        let mut seen = BTreeSet::new();
        let len = n - 2;
        for index in 0..n.pow(len as u32) {
            // Prüfer digits, last digit fastest
            let code: Vec<usize> = (0..len).map(|k| index / n.pow((len - 1 - k) as u32) % n).collect();
            let edges = prufer_decode(&code, n);
            if seen.insert(tree_canonical_form(n, &edges)) {
                out.push((n, edges));
            }
        }
    }
    out
}

fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Smallest rooted encoding over all roots.
fn tree_canonical_form(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n).map(|r| rooted_code(&adj, r, usize::MAX)).min().expect("n ≥ 1")
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}
