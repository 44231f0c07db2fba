//! Randomized and exhaustive checks of the library against oracles computed here by
//! direct enumeration. Used by `selftest --random-cases` and by the acceptance suite.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use logtwist::admissible::{AdmissibleGroup, AdmissibleMonoid};
use logtwist::contraction::{
    char_maps, compose_char_maps, contract, count_structures, fiber_size, greedy_factorization, initial_contraction,
    is_glt_contraction, picard_kernel, stabilize, stabilize_with_order, ComponentKind, ContractionPlan, LabeledMatrix,
    PicardGenerator, PicardTree,
};
use logtwist::curve::{is_stable, GltStructure, GraphBuilder, MarkedDualGraph};
use logtwist::lattice::{frac, rat, FiniteAbelianGroup, Rational};
use logtwist::local::{
    characters, decide_pushout, local_monoid_from_submonoid, pushout_to_local, Character, LocalMonoid, PushoutOutcome,
    SubmonoidPresentation,
};
use logtwist::random;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

/// Failure messages kept per check; the count covers all of them.
const KEPT_MESSAGES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub messages: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            cases: 0,
            failures: 0,
            messages: Vec::new(),
        }
    }

    fn fail(&mut self, message: String) {
        self.failures += 1;
        if self.messages.len() < KEPT_MESSAGES {
            self.messages.push(message);
        }
    }

    fn expect(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.fail(message());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "messages": self.messages,
            "passed": self.passed(),
        })
    }
}

/// All checks at a common size, for `selftest --random-cases`.
pub fn all(seed: u64, cases: usize) -> Vec<CheckReport> {
    vec![
        lemma_suite(seed, cases),
        decision_suite(seed, cases),
        mu4_audit(),
        contraction_suite(seed, cases, 20),
        picard_trees(7),
        initial_oracle(seed, cases),
        counting_sweep(10_000),
    ]
}

fn frac_vec(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(frac).collect()
}

/// Classes of `Z^n + Σ Z·g` modulo `Z^n`, by breadth-first closure under the generators.
pub fn closure(n: usize, gens: &[Vec<Rational>]) -> BTreeSet<Vec<Rational>> {
    let steps: Vec<Vec<Rational>> = gens.iter().map(|g| frac_vec(g)).collect();
    let mut seen = BTreeSet::from([vec![Rational::zero(); n]]);
    let mut queue = VecDeque::from([vec![Rational::zero(); n]]);
    while let Some(x) = queue.pop_front() {
        for g in &steps {
            let y: Vec<Rational> = x.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn group_classes(g: &AdmissibleGroup) -> BTreeSet<Vec<Rational>> {
    closure(g.rank(), &g.representatives())
}

fn max_denominator(s: &BTreeSet<Vec<Rational>>, i: usize) -> u64 {
    s.iter()
        .map(|v| v[i].denom().to_u64().expect("small"))
        .max()
        .unwrap_or(1)
}

/// Monoid↔group round trip, the fractional-part law, quotient against projected classes,
/// and rank-one quotients as `(1/m)N`.
pub fn lemma_suite(seed: u64, cases: usize) -> CheckReport {
    let mut r = CheckReport::new("lemma suite");
    let mut rng = random::rng(seed ^ 0x1e55a);
    for case in 0..cases {
        r.cases += 1;
        let (n, gens) = random::admissible_generators(&mut rng, 4, 12);
        let ctx = |what: &str| format!("case {case} rank {n} gens {gens:?}: {what}");
        let classes = closure(n, &gens);
        let m = match AdmissibleMonoid::new(n, &gens) {
            Ok(m) => m,
            Err(e) => {
                r.fail(ctx(&format!("rejected: {e}")));
                continue;
            }
        };
        r.expect(group_classes(m.group()) == classes, || {
            ctx("group classes differ from closure")
        });
        r.expect(AdmissibleMonoid::from_group(m.group().clone()) == m, || {
            ctx("monoid from group differs")
        });
        r.expect(
            AdmissibleMonoid::new(n, &m.generators()).ok().as_ref() == Some(&m),
            || ctx("regenerating from generators differs"),
        );
        r.expect(closure(n, &m.generators()) == classes, || {
            ctx("generators span other classes")
        });

        // membership of random vectors in [-1, 3)^n with denominators ≤ 12
        for _ in 0..8 {
            let v: Vec<Rational> = (0..n)
                .map(|_| {
                    let q = rng.gen_range(1..=12);
                    rat(rng.gen_range(-q..3 * q), q)
                })
                .collect();
            let expected = v.iter().all(|x| !x.is_negative()) && classes.contains(&frac_vec(&v));
            r.expect(m.contains(&v).ok() == Some(expected), || {
                ctx(&format!("membership of {v:?}"))
            });
        }
        // every class plus a nonnegative integer vector lies in the monoid
        for c in classes.iter().take(6) {
            let v: Vec<Rational> = c
                .iter()
                .map(|x| x + Rational::from_integer(rng.gen_range(0..3).into()))
                .collect();
            r.expect(m.contains(&v).ok() == Some(true), || {
                ctx(&format!("class lift {v:?} missing"))
            });
        }

        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let projected: BTreeSet<Vec<Rational>> = classes
                .iter()
                .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
                .collect();
            match (m.quotient(&idx), m.group().quotient(&idx)) {
                (Ok(q), Ok(qg)) => {
                    r.expect(q.group() == &qg, || {
                        ctx(&format!("quotient {idx:?} disagrees with group quotient"))
                    });
                    r.expect(group_classes(q.group()) == projected, || {
                        ctx(&format!("quotient {idx:?} classes"))
                    });
                    if idx.len() == 1 {
                        let k = max_denominator(&projected, 0);
                        r.expect(q == AdmissibleMonoid::free(&[k]), || {
                            ctx(&format!("rank-one quotient {idx:?} is not (1/{k})N"))
                        });
                    }
                }
                _ => r.fail(ctx(&format!("quotient {idx:?} failed"))),
            }
        }
    }
    r
}

/// `χ(θ)` in `[0, 1)` from the character's numerators over the invariant factors.
fn character_value(chi: &Character, x: &FiniteAbelianGroup, theta: &[u64]) -> Rational {
    let total = chi
        .values()
        .iter()
        .zip(theta)
        .zip(x.invariant_factors())
        .map(|((&v, &t), &d)| rat((v * t % d) as i64, d as i64))
        .fold(Rational::zero(), |a, b| a + b);
    frac(&total)
}

/// Carry table of `Σ_columns [χ(θ) + χ(θ') ≥ 1]`, by element index.
fn column_carries(columns: &[Character], x: &FiniteAbelianGroup) -> Vec<Vec<u64>> {
    let els = x.elements();
    let values: Vec<Vec<Rational>> = els
        .iter()
        .map(|t| columns.iter().map(|c| character_value(c, x, t)).collect())
        .collect();
    (0..els.len())
        .map(|a| {
            (0..els.len())
                .map(|b| {
                    values[a]
                        .iter()
                        .zip(&values[b])
                        .filter(|(u, v)| *u + *v >= Rational::one())
                        .count() as u64
                })
                .collect()
        })
        .collect()
}

fn separates(columns: &[Character], x: &FiniteAbelianGroup) -> bool {
    x.elements()
        .iter()
        .skip(1)
        .all(|t| columns.iter().any(|c| !character_value(c, x, t).is_zero()))
}

fn table_matches(d: &LocalMonoid, table: &[Vec<u64>]) -> bool {
    (0..table.len()).all(|a| (0..table.len()).all(|b| table[a][b] == d.carry_at(a, b)))
}

/// YES with a verified witness on random valid cocycles over `Z/2` and `Z/3`, and
/// `pushout_to_local(witness) = input` under the witness identification.
pub fn decision_suite(seed: u64, cases_per_group: usize) -> CheckReport {
    let mut r = CheckReport::new("decision suite");
    let mut rng = random::rng(seed ^ 0xdec1de);
    for order in [2u64, 3] {
        let x = FiniteAbelianGroup::cyclic(order);
        for case in 0..cases_per_group {
            r.cases += 1;
            let d = random::local_monoid(&mut rng, &x, 6);
            let ctx = |what: &str| format!("Z/{order} case {case} carries {:?}: {what}", d.upper_triangle());
            let decision = match decide_pushout(&d) {
                Ok(v) => v,
                Err(e) => {
                    r.fail(ctx(&format!("error {e}")));
                    continue;
                }
            };
            let PushoutOutcome::Representable(w) = &decision.outcome else {
                r.fail(ctx("answered NO"));
                continue;
            };
            r.expect(w.verify(&d), || ctx("witness fails its own verification"));
            r.expect(table_matches(&d, &column_carries(&w.columns, &x)), || {
                ctx("witness carries differ")
            });
            r.expect(separates(&w.columns, &x), || ctx("witness columns do not separate"));
            r.expect(w.local_monoid(&x) == d, || ctx("pushout of witness differs"));
            r.expect(pushout_to_local(&w.monoid).is_isomorphic(&d), || {
                ctx("pushout of witness monoid not isomorphic")
            });
            r.expect(w.monoid.stabilizer_group() == x, || {
                ctx("witness monoid has another character group")
            });
        }
    }
    r
}

/// The cocycle `(0,1,1,2,1,0)` on `Z/4`.
pub fn mu4() -> LocalMonoid {
    LocalMonoid::from_upper_triangle(FiniteAbelianGroup::cyclic(4), &[0, 1, 1, 2, 1, 0]).expect("table shape")
}

/// NO on the μ4 cocycle, audited by brute force over the certificate's multiplicity caps,
/// with the caps themselves checked against the `(θ, −θ)` equations.
pub fn mu4_audit() -> CheckReport {
    let mut r = CheckReport::new("mu4 audit");
    r.cases = 1;
    let d = mu4();
    let x = d.group().clone();
    r.expect(d.validate().is_ok(), || "mu4 cocycle is not valid".into());
    let built = local_monoid_from_submonoid(
        &SubmonoidPresentation {
            torsion: FiniteAbelianGroup::cyclic(2),
            generators: vec![(1, vec![0]), (1, vec![1])],
            unit: (2, vec![1]),
        },
        64,
    );
    r.expect(built.map_or(false, |b| b.local.is_isomorphic(&d)), || {
        "submonoid build does not give mu4".into()
    });
    let decision = match decide_pushout(&d) {
        Ok(v) => v,
        Err(e) => {
            r.fail(format!("error {e}"));
            return r;
        }
    };
    let PushoutOutcome::NotRepresentable(cert) = &decision.outcome else {
        r.fail("answered YES".into());
        return r;
    };
    let nonzero: Vec<Character> = characters(&x).into_iter().filter(|c| !c.is_zero()).collect();
    let listed: Vec<&Character> = cert.bounds.iter().map(|(c, _)| c).collect();
    r.expect(listed == nonzero.iter().collect::<Vec<_>>(), || {
        "certificate does not list every nonzero character".into()
    });
    let els = x.elements();
    for (chi, bound) in &cert.bounds {
        let tight = (1..els.len())
            .filter(|&a| !character_value(chi, &x, &els[a]).is_zero())
            .map(|a| d.carry_at(a, x.index_of(&x.neg(&els[a]))))
            .min()
            .expect("nonzero character");
        r.expect(*bound >= tight, || {
            format!("cap {bound} for {:?} is below the forced bound {tight}", chi.values())
        });
    }
    let caps: Vec<u64> = cert.bounds.iter().map(|(_, b)| *b).collect();
    let mut m = vec![0u64; caps.len()];
    loop {
        let columns: Vec<Character> = cert
            .bounds
            .iter()
            .zip(&m)
            .flat_map(|((c, _), &k)| std::iter::repeat(c.clone()).take(k as usize))
            .collect();
        if table_matches(&d, &column_carries(&columns, &x)) && separates(&columns, &x) {
            r.fail(format!("multiplicities {m:?} realize the cocycle"));
        }
        let Some(k) = (0..m.len()).find(|&k| m[k] < caps[k]) else {
            break;
        };
        m[k] += 1;
        for j in 0..k {
            m[j] = 0;
        }
    }
    r
}

/// Generator labels and coefficients of the image of column `col`.
fn image_of(m: &LabeledMatrix, col: &str) -> Option<BTreeMap<String, i64>> {
    let g = m.cols.iter().find(|g| g.to_string() == col)?;
    let terms = m.image_terms(g)?;
    Some(
        terms
            .into_iter()
            .map(|(g, x)| (g.to_string(), x.to_i64().expect("small")))
            .collect(),
    )
}

fn single_step_charts(r: &mut CheckReport) {
    r.cases += 1;
    let bridge = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("B", 1)
        .vertex("P", 0)
        .edge("eAP", "A", "P")
        .edge("ePB", "P", "B")
        .build()
        .expect("bridge graph");
    let plan = ContractionPlan::new(&bridge, BTreeSet::from(["P".to_string()])).expect("bridge plan");
    let c = contract(&plan).expect("bridge contracts");
    r.expect(c.target.edges().len() == 1 && c.target.vertices().len() == 2, || {
        "bridge target shape".into()
    });
    let maps = char_maps(&plan).expect("bridge maps");
    let want = BTreeMap::from([("e[eAP]".to_string(), 1), ("e[ePB]".to_string(), 1)]);
    r.expect(image_of(&maps.base, "e[eAP]") == Some(want), || {
        "bridge base map is not e_AP + e_PB".into()
    });

    r.cases += 1;
    let tail = GraphBuilder::new()
        .vertex("A", 1)
        .vertex("P", 0)
        .edge("eAP", "A", "P")
        .point("s", "P", &[1])
        .markings(1)
        .build()
        .expect("tail graph");
    let plan = ContractionPlan::new(&tail, BTreeSet::from(["P".to_string()])).expect("tail plan");
    let c = contract(&plan).expect("tail contracts");
    r.expect(
        c.target.edges().is_empty() && c.target.points().get("s").map(|p| p.vertex.as_str()) == Some("A"),
        || "tail target shape".into(),
    );
    let maps = char_maps(&plan).expect("tail maps");
    let want = BTreeMap::from([("e[eAP.1@P]".to_string(), 1), ("s[1]".to_string(), 1)]);
    r.expect(image_of(&maps.chart, "s[1]") == Some(want), || {
        "tail chart map is not e^P_AP + e_s".into()
    });
}

/// Genus preservation, factorization against the direct contraction, functoriality of
/// chart maps, the single-step charts, and confluence of stabilization.
pub fn contraction_suite(seed: u64, graphs: usize, orders: usize) -> CheckReport {
    let mut r = CheckReport::new("contraction suite");
    single_step_charts(&mut r);
    let mut rng = random::rng(seed ^ 0xc0de);
    for case in 0..graphs {
        r.cases += 1;
        let inst = random::tree_instance(&mut rng, 6, 4);
        let ctx = |what: &str| format!("tree case {case} plan {:?}: {what}", inst.plan.collapsed());
        let Ok(direct) = contract(&inst.plan) else {
            r.fail(ctx("contraction failed"));
            continue;
        };
        r.expect(direct.target.genus() == inst.graph.genus(), || ctx("genus changed"));
        let Ok(steps) = greedy_factorization(&inst.plan) else {
            r.fail(ctx("factorization failed"));
            continue;
        };
        let mut current = inst.graph.clone();
        let mut composed = None;
        for s in &steps {
            if s.source() != &current {
                r.fail(ctx("factor does not start where the previous ended"));
                break;
            }
            let (Ok(c), Ok(m)) = (contract(s), char_maps(s)) else {
                r.fail(ctx("factor failed"));
                break;
            };
            r.expect(c.target.genus() == current.genus(), || ctx("factor changed genus"));
            current = c.target;
            composed = match composed.take() {
                None => Some(m),
                Some(prev) => match compose_char_maps(&prev, &m) {
                    Ok(x) => Some(x),
                    Err(e) => {
                        r.fail(ctx(&format!("composition failed: {e}")));
                        break;
                    }
                },
            };
        }
        r.expect(current == direct.target, || ctx("composite target differs"));
        if let (Some(c), Ok(all)) = (composed, char_maps(&inst.plan)) {
            r.expect(c.base.agrees_up_to_loop_orientation(&all.base), || {
                ctx("base maps differ")
            });
            r.expect(c.chart.agrees_up_to_loop_orientation(&all.chart), || {
                ctx("chart maps differ")
            });
        }
    }
    for case in 0..graphs {
        r.cases += 1;
        let g = random::weighted_graph(&mut rng, 7, 5);
        let d = random::decoration(&mut rng, &g, 0.7);
        let ctx = |what: &str| format!("weighted case {case}: {what}");
        let first = stabilize(&g, &d);
        for _ in 0..orders {
            let other = stabilize_with_order(&g, &d, |v| rng.gen_range(0..v.len()));
            match (&first, &other) {
                (Ok(a), Ok(b)) => {
                    r.expect(a.plan == b.plan && a.contraction.target == b.contraction.target, || {
                        ctx("orders reach different results")
                    });
                }
                (Err(_), Err(_)) => {}
                _ => r.fail(ctx("orders disagree on feasibility")),
            }
        }
        match first {
            Ok(s) => {
                r.expect(s.contraction.target.genus() == g.genus(), || ctx("genus changed"));
                r.expect(
                    is_stable(&s.contraction.target, &s.decoration).map_or(false, |x| x.stable),
                    || ctx("result is not stable"),
                );
            }
            Err(e) => r.fail(ctx(&format!("stabilization failed: {e}"))),
        }
    }
    r
}

/// Every tree up to `max_vertices` vertices with every root and marking vertex.
pub fn picard_trees(max_vertices: usize) -> CheckReport {
    let mut r = CheckReport::new("picard trees");
    for (n, edges) in random::unlabeled_trees(max_vertices) {
        for root in 0..n {
            for marking in 0..n {
                r.cases += 1;
                let ctx = |what: &str| format!("tree {edges:?} root {root} marking {marking}: {what}");
                let k = match picard_kernel(&PicardTree {
                    vertices: n,
                    edges: edges.clone(),
                    root,
                    marking,
                }) {
                    Ok(k) => k,
                    Err(e) => {
                        r.fail(ctx(&e.to_string()));
                        continue;
                    }
                };
                if let Err(e) = k.verify() {
                    r.fail(ctx(&e));
                }
                let zero = vec![BigInt::zero(); k.matrix.rows()];
                for g in k.diagonals.iter().chain([&k.w_prime]) {
                    r.expect(k.matrix.mul_vec(g) == zero, || ctx("generator outside the kernel"));
                }
                r.expect(k.diagonals.len() == n, || ctx("one diagonal per node expected"));
                r.expect(k.kernel.rows() == n + 1, || ctx("kernel rank is not n + 1"));
                let at = |g: PicardGenerator| k.generators.iter().position(|&x| x == g).map(|p| k.w_prime[p].clone());
                r.expect(at(PicardGenerator::T0Plus) == Some(BigInt::zero()), || {
                    ctx("w' has t0+ coefficient")
                });
                r.expect(at(PicardGenerator::T0Minus) == Some(BigInt::one()), || {
                    ctx("w' lacks t0- coefficient 1")
                });
            }
        }
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generator of the saturation `Σ c_j Z`: the largest integer dividing every `c_j`.
fn saturation(indices: &[u64]) -> u64 {
    let lo = *indices.iter().min().expect("nonempty chain");
    (1..=lo)
        .rev()
        .find(|d| indices.iter().all(|c| c % d == 0))
        .expect("1 divides")
}

/// Vertices reachable from `start` inside `within` without crossing `blocked`.
fn side(g: &MarkedDualGraph, within: &BTreeSet<String>, start: &str, blocked: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([start.to_string()]);
    let mut stack = vec![start.to_string()];
    while let Some(v) = stack.pop() {
        for (id, e) in g.edges() {
            if id == blocked || !e.ends.contains(&v) {
                continue;
            }
            for w in &e.ends {
                if within.contains(w) && seen.insert(w.clone()) {
                    stack.push(w.clone());
                }
            }
        }
    }
    seen
}

/// Classes `v` of the merged stalk, enumerated from the source stalks and the node congruences.
fn allowed_classes(
    g: &MarkedDualGraph,
    glt: &GltStructure,
    vertices: &BTreeSet<String>,
    attachment: (&str, &str),
) -> (Vec<usize>, BTreeSet<Vec<Rational>>) {
    let mut markings: Vec<usize> = vertices.iter().flat_map(|v| g.markings_on(v)).collect();
    markings.sort_unstable();
    let pos = |i: usize| markings.iter().position(|&x| x == i).expect("marking in fiber");
    let mut set = BTreeSet::from([vec![Rational::zero(); markings.len()]]);
    for v in vertices {
        for (id, p) in g.points_on(v) {
            let local = group_classes(glt.stalks[id].group());
            set = set
                .iter()
                .flat_map(|x| {
                    local.iter().map(move |c| {
                        let mut y = x.clone();
                        for (val, &i) in c.iter().zip(&p.markings) {
                            y[pos(i)] = val.clone();
                        }
                        y
                    })
                })
                .collect();
        }
    }
    // S_ν: markings beyond ν as seen from the core.
    let (attach_edge, inner) = attachment;
    let mut supports = vec![(attach_edge.to_string(), markings.clone())];
    for (id, e) in g.edges() {
        if id == attach_edge || !vertices.contains(&e.ends[0]) || !vertices.contains(&e.ends[1]) {
            continue;
        }
        let near = side(g, vertices, inner, id);
        let far: Vec<usize> = markings
            .iter()
            .copied()
            .filter(|&i| !near.contains(&g.points()[g.point_of_marking(i).expect("placed")].vertex))
            .collect();
        supports.push((id.clone(), far));
    }
    set.retain(|v| {
        supports.iter().all(|(e, s)| {
            let c = Rational::from_integer(glt.node_index[e].into());
            let total: Rational = s
                .iter()
                .map(|&i| v[pos(i)].clone())
                .fold(Rational::zero(), |a, b| a + b);
            (total * c).is_integer()
        })
    });
    (markings, set)
}

/// The initial stalk equals the enumerated allowed set, a candidate stalk passes the
/// contraction check exactly when its classes lie in that set, and bridge node indices
/// equal the saturation of the index chain.
pub fn initial_oracle(seed: u64, cases: usize) -> CheckReport {
    let mut r = CheckReport::new("initial contraction oracle");
    let mut rng = random::rng(seed ^ 0x1417);
    for case in 0..cases {
        r.cases += 1;
        let inst = random::tree_instance(&mut rng, 5, 3);
        let g = &inst.graph;
        let mut glt = random::glt_structure(&mut rng, g, 6, 6);
        // index 6 at half the nodes keeps the congruences from killing every class
        for c in glt.node_index.values_mut() {
            if rng.gen_bool(0.5) {
                *c = 6;
            }
        }
        let ctx = |what: &str| format!("case {case} plan {:?}: {what}", inst.plan.collapsed());
        let init = match initial_contraction(&glt, &inst.plan) {
            Ok(x) => x,
            Err(e) => {
                r.fail(ctx(&format!("initial contraction failed: {e}")));
                continue;
            }
        };
        for (id, p) in g.points() {
            if inst.plan.component_of(&p.vertex).is_none() {
                r.expect(init.glt.stalks.get(id) == glt.stalks.get(id), || {
                    ctx(&format!("stalk {id} changed"))
                });
            }
        }
        for c in inst.plan.components() {
            match c.kind {
                ComponentKind::Bridge => {
                    let (a, b) = (&c.attachments[0], &c.attachments[1]);
                    // path from one attachment to the other through the component
                    let mut chain = vec![glt.node_index[&a.edge], glt.node_index[&b.edge]];
                    for (id, e) in g.edges() {
                        let inside = c.vertices.contains(&e.ends[0]) && c.vertices.contains(&e.ends[1]);
                        if inside && !side(g, &c.vertices, &a.inner, id).contains(&b.inner) {
                            chain.push(glt.node_index[id]);
                        }
                    }
                    let expected = saturation(&chain);
                    r.expect(expected == chain.iter().fold(0, |x, &y| gcd(x, y)), || {
                        ctx("saturation differs from gcd")
                    });
                    let id = inst.plan.merged_edge_id(c);
                    r.expect(init.glt.node_index.get(&id) == Some(&expected), || {
                        ctx(&format!(
                            "node {id} index {:?}, expected {expected}",
                            init.glt.node_index.get(&id)
                        ))
                    });
                }
                ComponentKind::Tail => {
                    let Some(pid) = inst.plan.merged_point_id(c) else {
                        continue;
                    };
                    let a = &c.attachments[0];
                    let (markings, allowed) = allowed_classes(g, &glt, &c.vertices, (&a.edge, &a.inner));
                    let k = markings.len();
                    let derived = &init.glt.stalks[&pid];
                    r.expect(group_classes(derived.group()) == allowed, || {
                        ctx(&format!("stalk at {pid} differs from the allowed set"))
                    });
                    let mut candidates: Vec<Vec<Vec<Rational>>> = Vec::new();
                    for _ in 0..4 {
                        let count = rng.gen_range(1..=2);
                        candidates.push(
                            (0..count)
                                .map(|_| {
                                    let q = rng.gen_range(1..=6);
                                    (0..k).map(|_| rat(rng.gen_range(0..q), q)).collect()
                                })
                                .collect(),
                        );
                    }
                    let elements: Vec<&Vec<Rational>> = allowed.iter().collect();
                    candidates.push(vec![elements[rng.gen_range(0..elements.len())].clone()]);
                    for gens in candidates {
                        let cand = AdmissibleMonoid::new(k, &gens).expect("rank matches");
                        let mut target = init.glt.clone();
                        target.stalks.insert(pid.clone(), cand);
                        let valid = is_glt_contraction(&glt, &inst.plan, &target).map(|x| x.valid);
                        let expected = closure(k, &gens).is_subset(&allowed);
                        r.expect(valid.as_ref().ok() == Some(&expected), || {
                            ctx(&format!(
                                "candidate {gens:?} at {pid}: check {valid:?}, oracle {expected}"
                            ))
                        });
                    }
                }
            }
        }
    }
    r
}

/// Invariant-factor chains `d_1 | ... | d_k` with `d_i ≥ 2` and `|A| · exp(A) ≤ cap`.
fn chains(cap: u64) -> Vec<Vec<u64>> {
    fn extend(chain: &mut Vec<u64>, order: u64, cap: u64, out: &mut Vec<Vec<u64>>) {
        let last = *chain.last().unwrap_or(&1);
        let mut d = if chain.is_empty() { 2 } else { last };
        while order * d * d <= cap {
            if d % last == 0 {
                chain.push(d);
                out.push(chain.clone());
                extend(chain, order * d, cap, out);
                chain.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, cap, &mut out);
    out
}

/// Fiber counts against `|A|^{n−1}` for every `(A, n)` with `exp(A)^n · |A| ≤ cap`
/// (trivial `A` up to `n = 64`), library counts on pushout cocycles for small `A`, and
/// the two exact realizations over `Z/2` with `n = 2`.
pub fn counting_sweep(cap: u64) -> CheckReport {
    let mut r = CheckReport::new("counting sweep");
    let trivial = FiniteAbelianGroup::trivial();
    for n in 1..=64 {
        r.cases += 1;
        r.expect(fiber_size(&trivial, n, &[], cap) == Some(BigInt::one()), || {
            format!("trivial A, n = {n}")
        });
    }
    for factors in chains(cap) {
        let a = FiniteAbelianGroup::new(factors.clone()).expect("divisibility chain");
        let e = a.exponent();
        let mut n = 1usize;
        while (e as u128).pow(n as u32) * a.order() as u128 <= cap as u128 {
            r.cases += 1;
            let predicted = BigInt::from(a.order()).pow(n as u32 - 1);
            let zero = vec![0; factors.len()];
            let ones = vec![1; factors.len()];
            let last: Vec<u64> = factors.iter().map(|d| d - 1).collect();
            for targets in [zero, ones, last] {
                let got = fiber_size(&a, n, &targets, cap);
                r.expect(got.as_ref() == Some(&predicted), || {
                    format!("A = {a}, n = {n}, χ {targets:?}: fiber {got:?}, expected {predicted}")
                });
            }
            if a.order() <= 16 {
                let d = pushout_to_local(&AdmissibleMonoid::free(&factors));
                let report = count_structures(&a, n, &d, cap);
                r.expect(
                    report
                        .as_ref()
                        .map_or(false, |x| x.verified && x.predicted == predicted),
                    || format!("A = {a}, n = {n}: library count {report:?}"),
                );
            }
            n += 1;
        }
    }
    r.cases += 1;
    let z2 = FiniteAbelianGroup::cyclic(2);
    let d = LocalMonoid::from_upper_triangle(z2.clone(), &[1]).expect("table shape");
    let first = AdmissibleMonoid::free(&[2, 1]);
    let second = AdmissibleMonoid::free(&[1, 2]);
    match count_structures(&z2, 2, &d, cap) {
        Ok(report) => {
            r.expect(report.predicted == BigInt::from(2) && report.verified, || {
                "(Z/2, 2) count is not 2".into()
            });
            let found: BTreeSet<_> = report
                .exact_realizations
                .unwrap_or_default()
                .iter()
                .map(|m| m.generators())
                .collect();
            let expected = BTreeSet::from([first.generators(), second.generators()]);
            r.expect(found == expected, || format!("(Z/2, 2) realizations {found:?}"));
        }
        Err(err) => r.fail(format!("(Z/2, 2): {err}")),
    }
    r
}
