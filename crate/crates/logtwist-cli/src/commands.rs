//! Argument parsing and command dispatch. Every command maps a parsed document to a
//! JSON result and a verdict; negative verdicts exit with status 1.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use logtwist::admissible::{normalize_indices, AdmissibleMonoid};
use logtwist::contraction::{
    char_maps, contract, count_structures, greedy_factorization, initial_contraction, is_glt_contraction,
    picard_kernel_for_marking, relative_coarse, stabilize, ComponentKind, Contraction, ContractionPlan, Image,
    LabeledMatrix, DEFAULT_ENUMERATION_CAP,
};
use logtwist::curve::{
    edge_stabilizer, is_isomorphic, is_of_stable_type, is_stable, local_chart, point_stabilizer, validate_glt,
    GltStructure, LocalChart, MapDecoration, MarkedDualGraph,
};
use logtwist::lattice::{format_rational, FiniteAbelianGroup, Rational};
use logtwist::local::{
    decide_pushout, local_monoid_from_submonoid, pushout_to_local, Character, LocalMonoid, PushoutOutcome,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::document::{
    decoration_to_dto, document_from_dto, glt_to_dto, graph_to_dto, local_to_dto, monoid_to_dto, parse_document,
    parse_dto, plan_to_dto, to_canonical_json, Document, InputError, Query,
};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "logtwist",
    version,
    about = "Exact computations with twisted log curves and their monoids"
)]
pub struct Cli {
    /// Input document (default: stdin).
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<String>,
    /// Output file (default: stdout).
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<String>,
    /// Cap on internal parallelism; all commands currently run on one thread.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Search and enumeration bound.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_denominator: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Admissible monoids: membership, equality, quotients, pushouts, envelopes, stabilizers.
    #[command(subcommand)]
    Monoid(MonoidOp),
    /// Local monoids given by carry cocycles.
    #[command(subcommand)]
    Local(LocalOp),
    /// Marked dual graphs with twisting data.
    #[command(subcommand)]
    Curve(CurveOp),
    /// Contractions of marked dual graphs.
    #[command(subcommand)]
    Contract(ContractOp),
    /// Weighted stabilization of a decorated graph.
    Stabilize,
    /// Counts structures over a local monoid.
    Count,
    /// Runs the bundled example corpus and, optionally, randomized checks.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoidOp {
    Contains,
    Equal,
    Quotient,
    Pushout,
    Envelope,
    Stabilizer,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOp {
    Validate,
    Add,
    FromAdmissible,
    Decide,
    Build,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveOp {
    Validate,
    Genus,
    Stabilizer,
    Chart,
    Isomorphic,
    Stable,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractOp {
    Apply,
    Factor,
    CharMaps,
    Check,
    Initial,
    RelCoarse,
    Picard,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SelftestArgs {
    /// Cases per randomized check; 0 runs the corpus only.
    #[arg(long, default_value_t = 0)]
    pub random_cases: usize,
}

/// What a command produced: the JSON result and whether the decision was positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub value: Value,
    pub positive: bool,
}

impl Verdict {
    fn yes(value: Value) -> Self {
        Verdict { value, positive: true }
    }

    fn decide(value: Value, positive: bool) -> Self {
        Verdict { value, positive }
    }
}

/// Everything that makes a command fail with exit status 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandError(pub String);

impl From<InputError> for CommandError {
    fn from(e: InputError) -> Self {
        CommandError(e.to_string())
    }
}

macro_rules! op_err {
    ($e:expr) => {
        $e.map_err(|e| CommandError(e.to_string()))
    };
}

fn missing(section: &str) -> CommandError {
    CommandError(format!("at {section}: section required by this command"))
}

fn section<'a, T>(x: &'a Option<T>, name: &str) -> Result<&'a T, CommandError> {
    x.as_ref().ok_or_else(|| missing(name))
}

fn query(doc: &Document) -> Result<&Query, CommandError> {
    section(&doc.query, "query")
}

pub fn group_json(g: &FiniteAbelianGroup) -> Value {
    json!({ "invariant-factors": g.invariant_factors(), "display": g.to_string(), "order": g.order() })
}

fn rationals(v: &[Rational]) -> Value {
    Value::from(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn monoid_json(m: &AdmissibleMonoid) -> Value {
    let mut v = serde_json::to_value(monoid_to_dto(m)).expect("serializes");
    v["display"] = Value::from(m.to_string());
    v
}

/// Converts 1-based marking positions to library coordinates.
fn zero_based(rank: usize, indices: &[usize]) -> Result<Vec<usize>, CommandError> {
    if let Some(&i) = indices.iter().find(|&&i| i == 0 || i > rank) {
        return Err(CommandError(format!("at query.indices: index {i} outside 1..={rank}")));
    }
    let idx: Vec<usize> = indices.iter().map(|i| i - 1).collect();
    op_err!(normalize_indices(rank, &idx))
}

pub fn execute(cli: &Cli, input: &str) -> Result<Verdict, CommandError> {
    match &cli.command {
        Command::Selftest(args) => Ok(crate::corpus::selftest(cli, args)),
        Command::Curve(CurveOp::Validate) => curve_validate(input),
        command => {
            let doc = parse_document(input)?;
            match command {
                Command::Monoid(op) => monoid_command(*op, &doc),
                Command::Local(op) => local_command(*op, &doc, cli.max_denominator),
                Command::Curve(op) => curve_command(*op, &doc),
                Command::Contract(op) => contract_command(*op, &doc),
                Command::Stabilize => stabilize_command(&doc),
                Command::Count => count_command(&doc),
                Command::Selftest(_) => unreachable!("handled above"),
            }
        }
    }
}

fn monoid_command(op: MonoidOp, doc: &Document) -> Result<Verdict, CommandError> {
    let m = section(&doc.monoid, "monoid")?;
    match op {
        MonoidOp::Contains => {
            let v = query(doc)?.vector.as_ref().ok_or_else(|| missing("query.vector"))?;
            let inside = op_err!(m.contains(v))?;
            let in_group = op_err!(m.group().contains(v))?;
            Ok(Verdict::decide(
                json!({ "contains": inside, "in-group": in_group, "vector": rationals(v) }),
                inside,
            ))
        }
        MonoidOp::Equal => {
            let other = section(&doc.other_monoid, "other-monoid")?;
            let left_in_right = op_err!(m.is_contained(other))?;
            let right_in_left = op_err!(other.is_contained(m))?;
            let equal = left_in_right && right_in_left;
            Ok(Verdict::decide(
                json!({ "equal": equal, "left-in-right": left_in_right, "right-in-left": right_in_left }),
                equal,
            ))
        }
        MonoidOp::Quotient => {
            let idx = query(doc)?.indices.as_ref().ok_or_else(|| missing("query.indices"))?;
            let q = op_err!(m.quotient(&zero_based(m.rank(), idx)?))?;
            Ok(Verdict::yes(json!({ "indices": idx, "quotient": monoid_json(&q) })))
        }
        MonoidOp::Pushout => {
            let idx = query(doc)?.indices.as_ref().ok_or_else(|| missing("query.indices"))?;
            let p = op_err!(m.group().pushout_abelian(&zero_based(m.rank(), idx)?))?;
            let free = match p.free_rank {
                0 => None,
                1 => Some("Z".to_string()),
                r => Some(format!("Z^{r}")),
            };
            let display = match (free, p.torsion.is_trivial()) {
                (None, true) => "0".to_string(),
                (None, false) => p.torsion.to_string(),
                (Some(f), true) => f,
                (Some(f), false) => format!("{f} ⊕ {}", p.torsion),
            };
            let images: Vec<Value> = p.free_generator_images().iter().map(|v| rationals(v)).collect();
            Ok(Verdict::yes(json!({
                "indices": idx,
                "free-rank": p.free_rank,
                "torsion": group_json(&p.torsion),
                "display": display,
                "free-generator-images": images,
            })))
        }
        MonoidOp::Envelope => {
            let (orders, env) = m.free_envelope();
            Ok(Verdict::yes(json!({
                "orders": orders,
                "envelope": monoid_json(&env),
                "is-free": env == *m,
            })))
        }
        MonoidOp::Stabilizer => {
            let (orders, _) = m.free_envelope();
            let x = m.stabilizer_group();
            let product = FiniteAbelianGroup::from_cyclic_orders(&orders);
            Ok(Verdict::yes(json!({
                "group": group_json(&x),
                "ambient-orders": orders,
                "is-full-product": x == product,
            })))
        }
    }
}

fn element_json(x: &(u64, Vec<u64>)) -> Value {
    json!([x.0, x.1])
}

fn character_json(chi: &Character, x: &FiniteAbelianGroup) -> Value {
    json!({ "values": chi.values(), "on-generators": rationals(&chi.generator_values(x)) })
}

fn local_json(d: &LocalMonoid) -> Value {
    let mut v = serde_json::to_value(local_to_dto(d)).expect("serializes");
    v["display"] = Value::from(d.group().to_string());
    v
}

fn local_command(op: LocalOp, doc: &Document, bound: u64) -> Result<Verdict, CommandError> {
    match op {
        LocalOp::Validate => {
            let d = section(&doc.local_monoid, "local-monoid")?;
            Ok(match d.validate() {
                Ok(()) => Verdict::yes(json!({ "valid": true })),
                Err(v) => Verdict::decide(json!({ "valid": false, "violation": v.to_string() }), false),
            })
        }
        LocalOp::Add => {
            let d = section(&doc.local_monoid, "local-monoid")?;
            op_err!(d.validate())?;
            let s = query(doc)?.summands.as_ref().ok_or_else(|| missing("query.summands"))?;
            if s.is_empty() {
                return Err(CommandError("at query.summands: need at least one element".into()));
            }
            for (k, x) in s.iter().enumerate() {
                if !d.group().is_element(&x.1) {
                    return Err(CommandError(format!(
                        "at query.summands[{k}]: not an element of {}",
                        d.group()
                    )));
                }
            }
            let sum = s[1..].iter().fold(s[0].clone(), |acc, x| d.add(&acc, x));
            Ok(Verdict::yes(json!({ "sum": element_json(&sum) })))
        }
        LocalOp::FromAdmissible => {
            let m = section(&doc.monoid, "monoid")?;
            Ok(Verdict::yes(
                json!({ "local-monoid": local_json(&pushout_to_local(m)) }),
            ))
        }
        LocalOp::Decide => {
            let d = section(&doc.local_monoid, "local-monoid")?;
            let decision = op_err!(decide_pushout(d))?;
            let x = d.group();
            let mut out = json!({
                "representable": decision.is_representable(),
                "raw-feasible": decision.raw_feasible,
            });
            match &decision.outcome {
                PushoutOutcome::Representable(w) => {
                    let mults: Vec<Value> = w
                        .multiplicities
                        .iter()
                        .map(|(chi, m)| json!({ "character": character_json(chi, x), "multiplicity": m }))
                        .collect();
                    out["witness"] = json!({
                        "multiplicities": mults,
                        "columns": w.columns.iter().map(|c| c.values().to_vec()).collect::<Vec<_>>(),
                        "monoid": monoid_json(&w.monoid),
                        "verified": w.verify(d),
                    });
                }
                PushoutOutcome::NotRepresentable(cert) => {
                    let bounds: Vec<Value> = cert
                        .bounds
                        .iter()
                        .map(|(chi, b)| json!({ "character": character_json(chi, x), "bound": b }))
                        .collect();
                    let pruned: Vec<Value> = cert
                        .pruned
                        .iter()
                        .map(|p| {
                            json!({
                                "assignment": p.assignment,
                                "pair": [p.pair.0, p.pair.1],
                                "residual": p.residual,
                                "capacity": p.capacity,
                            })
                        })
                        .collect();
                    out["certificate"] = json!({
                        "bounds": bounds,
                        "pruned": pruned,
                        "pruned-total": cert.pruned_total,
                        "rejected-nonseparating": cert.rejected_nonseparating,
                    });
                }
            }
            let positive = decision.is_representable();
            Ok(Verdict::decide(out, positive))
        }
        LocalOp::Build => {
            let p = section(&doc.submonoid, "submonoid")?;
            let built = op_err!(local_monoid_from_submonoid(p, bound))?;
            let lifts: Vec<Value> = built.minimal_lifts.iter().map(element_json).collect();
            Ok(Verdict::yes(json!({
                "local-monoid": local_json(&built.local),
                "minimal-lifts": lifts,
                "bound": bound,
            })))
        }
    }
}

fn curve_validate(input: &str) -> Result<Verdict, CommandError> {
    let dto = parse_dto(input)?;
    match document_from_dto(&dto) {
        Ok(doc) => {
            section(&doc.graph, "graph")?;
            Ok(Verdict::yes(json!({ "valid": true })))
        }
        Err(e) if e.path.starts_with("graph") || e.path.starts_with("glt-structure") => Ok(Verdict::decide(
            json!({ "valid": false, "error": e.to_string() }),
            false,
        )),
        Err(e) => Err(e.into()),
    }
}

fn glt_or_untwisted(g: &MarkedDualGraph, t: &Option<GltStructure>) -> GltStructure {
    t.clone().unwrap_or_else(|| GltStructure::untwisted(g))
}

fn chart_json(c: &LocalChart) -> Value {
    let mut v = match c {
        LocalChart::Point {
            markings,
            monoid,
            group,
        } => json!({
            "type": "point",
            "markings": markings,
            "monoid": monoid_json(monoid),
            "group": group_json(group),
        }),
        LocalChart::Node { index, weights } => json!({
            "type": "node",
            "index": index,
            "weights": [weights.0, weights.1],
        }),
    };
    v["display"] = Value::from(c.to_string());
    v["trivial"] = Value::from(c.is_trivial());
    v
}

fn curve_command(op: CurveOp, doc: &Document) -> Result<Verdict, CommandError> {
    let g = section(&doc.graph, "graph")?;
    let glt = glt_or_untwisted(g, &doc.glt);
    match op {
        CurveOp::Validate => unreachable!("handled before parsing"),
        CurveOp::Genus => {
            let mut out = json!({
                "genus": g.genus(),
                "vertices": g.vertices().len(),
                "nodes": g.edges().len(),
                "markings": g.marking_count(),
            });
            if g.weights().is_some() {
                out["stability-number"] = Value::from(format_rational(&op_err!(g.stability_number())?));
                out["stable-type"] = Value::from(op_err!(is_of_stable_type(g))?);
            }
            Ok(Verdict::yes(out))
        }
        CurveOp::Stabilizer => {
            let id = query(doc)?.id.as_ref().ok_or_else(|| missing("query.id"))?;
            let x = if g.points().contains_key(id) {
                op_err!(point_stabilizer(g, &glt, id))?
            } else {
                op_err!(edge_stabilizer(g, &glt, id))?
            };
            Ok(Verdict::yes(json!({ "id": id, "group": group_json(&x) })))
        }
        CurveOp::Chart => {
            let id = query(doc)?.id.as_ref().ok_or_else(|| missing("query.id"))?;
            let c = op_err!(local_chart(g, &glt, id))?;
            Ok(Verdict::yes(json!({ "id": id, "chart": chart_json(&c) })))
        }
        CurveOp::Isomorphic => {
            let h = section(&doc.other_graph, "other-graph")?;
            let other = glt_or_untwisted(h, &doc.other_glt);
            Ok(match is_isomorphic((g, &glt), (h, &other)) {
                Some(iso) => Verdict::yes(json!({
                    "isomorphic": true,
                    "map": { "vertices": iso.vertices, "edges": iso.edges, "points": iso.points },
                })),
                None => Verdict::decide(json!({ "isomorphic": false }), false),
            })
        }
        CurveOp::Stable => {
            let d = doc.decoration.clone().unwrap_or_else(|| MapDecoration::all(g));
            let r = op_err!(is_stable(g, &d))?;
            Ok(Verdict::decide(
                json!({ "stable": r.stable, "violators": r.violators }),
                r.stable,
            ))
        }
    }
}

fn image_json(i: &Image) -> Value {
    match i {
        Image::Vertex(v) => json!({ "vertex": v }),
        Image::Node(e) => json!({ "node": e }),
        Image::Point(p) => json!({ "point": p }),
    }
}

fn contraction_json(plan: &ContractionPlan, c: &Contraction) -> Value {
    let components: Vec<Value> = plan
        .components()
        .iter()
        .map(|k| {
            json!({
                "vertices": k.vertices.iter().collect::<Vec<_>>(),
                "kind": match k.kind { ComponentKind::Tail => "tail", ComponentKind::Bridge => "bridge" },
                "attachments": k.attachments.iter().map(|a| json!({
                    "edge": a.edge, "inner": a.inner, "outer": a.outer,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "target": graph_to_dto(&c.target),
        "vertex-map": c.vertex_map.iter().map(|(k, v)| (k.clone(), image_json(v))).collect::<BTreeMap<_, _>>(),
        "edge-map": c.edge_map.iter().map(|(k, v)| (k.clone(), image_json(v))).collect::<BTreeMap<_, _>>(),
        "point-map": c.point_map,
        "components": components,
    })
}

pub fn labeled_json(m: &LabeledMatrix) -> Value {
    let rows: Vec<String> = m.rows.iter().map(|g| g.to_string()).collect();
    let cols: Vec<String> = m.cols.iter().map(|g| g.to_string()).collect();
    let matrix: Vec<Vec<Value>> = m.matrix.to_rows().iter().map(|r| r.iter().map(big).collect()).collect();
    let mut images = BTreeMap::new();
    for (j, c) in m.cols.iter().enumerate() {
        let mut terms = BTreeMap::new();
        for (i, r) in m.rows.iter().enumerate() {
            let x = m.matrix.get(i, j);
            if x.to_i64() != Some(0) {
                terms.insert(r.to_string(), big(x));
            }
        }
        images.insert(c.to_string(), terms);
    }
    json!({ "rows": rows, "columns": cols, "matrix": matrix, "images": images })
}

fn plan_of(doc: &Document, g: &MarkedDualGraph) -> Result<ContractionPlan, CommandError> {
    let collapsed = section(&doc.plan, "plan")?;
    op_err!(ContractionPlan::new(g, collapsed.clone()))
}

fn contract_command(op: ContractOp, doc: &Document) -> Result<Verdict, CommandError> {
    let g = section(&doc.graph, "graph")?;
    match op {
        ContractOp::Apply => {
            let plan = plan_of(doc, g)?;
            let c = op_err!(contract(&plan))?;
            Ok(Verdict::yes(contraction_json(&plan, &c)))
        }
        ContractOp::Factor => {
            let plan = plan_of(doc, g)?;
            let steps = op_err!(greedy_factorization(&plan))?;
            let mut out = Vec::new();
            for s in &steps {
                let c = op_err!(contract(s))?;
                out.push(json!({ "plan": plan_to_dto(s.collapsed()), "target": graph_to_dto(&c.target) }));
            }
            Ok(Verdict::yes(json!({ "steps": out })))
        }
        ContractOp::CharMaps => {
            let plan = plan_of(doc, g)?;
            let m = op_err!(char_maps(&plan))?;
            Ok(Verdict::yes(
                json!({ "base": labeled_json(&m.base), "chart": labeled_json(&m.chart) }),
            ))
        }
        ContractOp::Check => {
            let plan = plan_of(doc, g)?;
            let glt = section(&doc.glt, "glt-structure")?;
            let target = section(&doc.target_glt, "target-glt-structure")?;
            let c = op_err!(contract(&plan))?;
            validate_glt(&c.target, target).map_err(|e| CommandError(format!("at target-glt-structure: {e}")))?;
            let r = op_err!(is_glt_contraction(glt, &plan, target))?;
            Ok(Verdict::decide(
                json!({ "valid": r.valid, "failures": r.failures }),
                r.valid,
            ))
        }
        ContractOp::Initial => {
            let plan = plan_of(doc, g)?;
            let glt = section(&doc.glt, "glt-structure")?;
            let init = op_err!(initial_contraction(glt, &plan))?;
            Ok(Verdict::yes(json!({
                "target": graph_to_dto(&init.contraction.target),
                "glt-structure": glt_to_dto(&init.glt),
            })))
        }
        ContractOp::RelCoarse => {
            let glt = section(&doc.glt, "glt-structure")?;
            let c = section(&doc.coarse, "coarse-data")?;
            let out = op_err!(relative_coarse(g, glt, &c.subgroups, &c.divisors))?;
            Ok(Verdict::yes(json!({ "glt-structure": glt_to_dto(&out) })))
        }
        ContractOp::Picard => {
            let plan = plan_of(doc, g)?;
            let i = query(doc)?.marking.ok_or_else(|| missing("query.marking"))?;
            let k = op_err!(picard_kernel_for_marking(&plan, i))?;
            let names: Vec<String> = k.generators.iter().map(|g| g.to_string()).collect();
            let terms = |v: &[BigInt]| -> BTreeMap<String, Value> {
                names
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| x.to_i64() != Some(0))
                    .map(|(n, x)| (n.clone(), big(x)))
                    .collect()
            };
            let verified = k.verify();
            Ok(Verdict::decide(
                json!({
                    "generators": names,
                    "w-prime": terms(&k.w_prime),
                    "diagonals": k.diagonals.iter().map(|d| terms(d)).collect::<Vec<_>>(),
                    "kernel-rank": k.kernel.rows(),
                    "path-length": k.path.len(),
                    "verified": verified.is_ok(),
                    "verification-error": verified.err(),
                }),
                k.verify().is_ok(),
            ))
        }
    }
}

fn stabilize_command(doc: &Document) -> Result<Verdict, CommandError> {
    let g = section(&doc.graph, "graph")?;
    let d = doc.decoration.clone().unwrap_or_else(|| MapDecoration::all(g));
    let s = op_err!(stabilize(g, &d))?;
    Ok(Verdict::yes(json!({
        "plan": plan_to_dto(s.plan.collapsed()),
        "order": s.order,
        "target": graph_to_dto(&s.contraction.target),
        "decoration": decoration_to_dto(&s.decoration),
    })))
}

fn count_command(doc: &Document) -> Result<Verdict, CommandError> {
    let d = section(&doc.local_monoid, "local-monoid")?;
    let q = query(doc)?;
    let a = q.group.clone().unwrap_or_else(|| d.group().clone());
    let n = q.multiplicity.ok_or_else(|| missing("query.multiplicity"))?;
    let r = op_err!(count_structures(&a, n, d, DEFAULT_ENUMERATION_CAP))?;
    let realizations = r
        .exact_realizations
        .as_ref()
        .map(|ms| ms.iter().map(monoid_json).collect::<Vec<_>>());
    Ok(Verdict::yes(json!({
        "group": group_json(&a),
        "multiplicity": n,
        "predicted": big(&r.predicted),
        "enumerated": r.enumerated.as_ref().map(big),
        "verified": r.verified,
        "exact-realizations": realizations,
    })))
}

/// Process-level outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command. `stdin` supplies the
/// document when `--input` is absent; `--output` is honored by writing the file.
pub fn run<I, T>(args: I, stdin: impl FnOnce() -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let input = if matches!(cli.command, Command::Selftest(_)) {
        Ok(String::new())
    } else {
        match &cli.input {
            Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
            None => stdin().map_err(|e| format!("cannot read stdin: {e}")),
        }
    };
    let input = match input {
        Ok(s) => s,
        Err(msg) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    };
    match execute(&cli, &input) {
        Ok(v) => {
            let text = to_canonical_json(&v.value);
            let code = if v.positive { 0 } else { 1 };
            match &cli.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome {
                        code,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {path}: {e}\n"),
                    },
                },
                None => Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                },
            }
        }
        Err(CommandError(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
