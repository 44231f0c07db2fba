//! The JSON document format: typed sections, parsing with located errors, and
//! canonical serialization with sorted keys.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use logtwist::admissible::AdmissibleMonoid;
use logtwist::curve::{validate_glt, Edge, GltStructure, MapDecoration, MarkedDualGraph, MarkedPoint, Vertex};
use logtwist::lattice::{format_rational, parse_rational, FiniteAbelianGroup, Rational};
use logtwist::local::{LocalMonoid, SubmonoidPresentation};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A schema or consistency problem in an input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "." } else { &self.path };
        match self.line {
            Some(l) => write!(f, "at {path} (line {l}): {}", self.message),
            None => write!(f, "at {path}: {}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        InputError {
            path: path.into(),
            line: None,
            message: message.into(),
        }
    }

    /// Attaches the line of the first occurrence of `needle` as a JSON string in `text`.
    fn locate(mut self, text: &str, needle: &str) -> Self {
        let quoted = format!("\"{needle}\"");
        self.line = text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1);
        self
    }
}

/// A rational written as `"p/q"` or `"p"`; rejected at parse time otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(Q)
            .ok_or_else(|| de::Error::custom(format!("{s:?} is not a rational \"p/q\"")))
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

macro_rules! section_kind {
    ($fn_name:ident, $default:ident, $kind:literal) => {
        fn $fn_name<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
            let s = String::deserialize(d)?;
            if s == $kind {
                Ok(s)
            } else {
                Err(de::Error::custom(format!(
                    "expected kind {:?}, found {s:?}",
                    $kind
                )))
            }
        }

        fn $default() -> String {
            $kind.to_string()
        }
    };
}

section_kind!(kind_monoid, default_monoid, "monoid");
section_kind!(kind_local, default_local, "local-monoid");
section_kind!(kind_graph, default_graph, "graph");
section_kind!(kind_glt, default_glt, "glt-structure");
section_kind!(kind_plan, default_plan, "plan");
section_kind!(kind_decoration, default_decoration, "decoration");
section_kind!(kind_submonoid, default_submonoid, "submonoid");
section_kind!(kind_coarse, default_coarse, "coarse-data");
section_kind!(kind_query, default_query, "query");
section_kind!(kind_document, default_document, "document");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDto {
    #[serde(deserialize_with = "kind_monoid", default = "default_monoid")]
    pub kind: String,
    pub rank: usize,
    #[serde(default)]
    pub generators: Vec<Vec<Q>>,
}

/// `X` by invariant factors and the carries `c(θ, θ')` for nonzero `θ ≤ θ'` in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalMonoidDto {
    #[serde(deserialize_with = "kind_local", default = "default_local")]
    pub kind: String,
    pub group: Vec<u64>,
    #[serde(default)]
    pub carries: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDto {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDto {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDto {
    pub id: String,
    pub vertex: String,
    pub markings: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDto {
    #[serde(deserialize_with = "kind_graph", default = "default_graph")]
    pub kind: String,
    pub vertices: Vec<VertexDto>,
    #[serde(default)]
    pub edges: Vec<EdgeDto>,
    #[serde(default)]
    pub points: Vec<PointDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markings: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct GltDto {
    #[serde(deserialize_with = "kind_glt", default = "default_glt")]
    pub kind: String,
    #[serde(default)]
    pub node_index: BTreeMap<String, u64>,
    #[serde(default)]
    pub stalks: BTreeMap<String, MonoidDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDto {
    #[serde(deserialize_with = "kind_plan", default = "default_plan")]
    pub kind: String,
    pub collapsed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecorationDto {
    #[serde(deserialize_with = "kind_decoration", default = "default_decoration")]
    pub kind: String,
    pub contracted: Vec<String>,
}

/// `D ⊆ N ⊕ F` with `F` by invariant factors; elements are `[a, [b...]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmonoidDto {
    #[serde(deserialize_with = "kind_submonoid", default = "default_submonoid")]
    pub kind: String,
    pub torsion: Vec<u64>,
    pub generators: Vec<(u64, Vec<u64>)>,
    pub unit: (u64, Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseDto {
    #[serde(deserialize_with = "kind_coarse", default = "default_coarse")]
    pub kind: String,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<Vec<Q>>>,
    #[serde(default)]
    pub divisors: BTreeMap<String, u64>,
}

/// Operation parameters; each command reads the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDto {
    #[serde(deserialize_with = "kind_query", default = "default_query")]
    pub kind: String,
    /// A rational vector, for membership.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Q>>,
    /// 1-based coordinate indices, for quotients and pushouts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    /// A point or edge id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<usize>,
    /// Invariant factors of a finite abelian group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
    /// Marking multiplicity for counting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    /// Elements `[a, [θ...]]` of a local monoid, for addition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<(u64, Vec<u64>)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DocumentDto {
    #[serde(deserialize_with = "kind_document", default = "default_document")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_monoid: Option<MonoidDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_monoid: Option<LocalMonoidDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glt_structure: Option<GltDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_graph: Option<GraphDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_glt_structure: Option<GltDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_glt_structure: Option<GltDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<DecorationDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submonoid: Option<SubmonoidDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_data: Option<CoarseDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryDto>,
}

/// Relative-coarse parameters after parsing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoarseData {
    pub subgroups: BTreeMap<String, Vec<Vec<Rational>>>,
    pub divisors: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Query {
    pub vector: Option<Vec<Rational>>,
    pub indices: Option<Vec<usize>>,
    pub id: Option<String>,
    pub marking: Option<usize>,
    pub group: Option<FiniteAbelianGroup>,
    pub multiplicity: Option<usize>,
    pub summands: Option<Vec<(u64, Vec<u64>)>>,
}

/// A parsed document. Graph-attached sections are checked against their graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub monoid: Option<AdmissibleMonoid>,
    pub other_monoid: Option<AdmissibleMonoid>,
    pub local_monoid: Option<LocalMonoid>,
    pub graph: Option<MarkedDualGraph>,
    pub glt: Option<GltStructure>,
    pub other_graph: Option<MarkedDualGraph>,
    pub other_glt: Option<GltStructure>,
    pub target_glt: Option<GltStructure>,
    pub plan: Option<BTreeSet<String>>,
    pub decoration: Option<MapDecoration>,
    pub submonoid: Option<SubmonoidPresentation>,
    pub coarse: Option<CoarseData>,
    pub query: Option<Query>,
}

/// Parses JSON text into the raw section layer, with path and line on failure.
pub fn parse_dto(text: &str) -> Result<DocumentDto, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let dto: DocumentDto = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        InputError {
            path: if path == "." || path == "?" {
                String::new()
            } else {
                path
            },
            line: Some(inner.line()),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| InputError {
        path: String::new(),
        line: Some(e.line()),
        message: strip_position(&e.to_string()),
    })?;
    Ok(dto)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Parses and checks a full document.
pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let dto = parse_dto(text)?;
    document_from_dto(&dto).map_err(|e| {
        let needle = e.path.rsplit('.').next().unwrap_or_default().to_string();
        match e.line {
            Some(_) => e,
            None => e.locate(text, &needle),
        }
    })
}

fn group_from(path: &str, factors: &[u64]) -> Result<FiniteAbelianGroup, InputError> {
    FiniteAbelianGroup::new(factors.to_vec()).map_err(|e| InputError::new(path, e.to_string()))
}

pub fn monoid_from_dto(path: &str, m: &MonoidDto) -> Result<AdmissibleMonoid, InputError> {
    let gens: Vec<Vec<Rational>> = m.generators.iter().map(|v| unq(v)).collect();
    AdmissibleMonoid::new(m.rank, &gens).map_err(|e| InputError::new(format!("{path}.generators"), e.to_string()))
}

pub fn monoid_to_dto(m: &AdmissibleMonoid) -> MonoidDto {
    MonoidDto {
        kind: default_monoid(),
        rank: m.rank(),
        generators: m.generators().iter().map(|v| qs(v)).collect(),
    }
}

pub fn local_from_dto(path: &str, d: &LocalMonoidDto) -> Result<LocalMonoid, InputError> {
    let x = group_from(&format!("{path}.group"), &d.group)?;
    LocalMonoid::from_upper_triangle(x, &d.carries)
        .map_err(|e| InputError::new(format!("{path}.carries"), e.to_string()))
}

pub fn local_to_dto(d: &LocalMonoid) -> LocalMonoidDto {
    LocalMonoidDto {
        kind: default_local(),
        group: d.group().invariant_factors().to_vec(),
        carries: d.upper_triangle(),
    }
}

pub fn graph_from_dto(path: &str, g: &GraphDto) -> Result<MarkedDualGraph, InputError> {
    let mut vertices = BTreeMap::new();
    for (k, v) in g.vertices.iter().enumerate() {
        if vertices.insert(v.id.clone(), Vertex { genus: v.genus }).is_some() {
            return Err(InputError::new(
                format!("{path}.vertices[{k}].id"),
                format!("duplicate id {:?}", v.id),
            ));
        }
    }
    let mut edges = BTreeMap::new();
    for (k, e) in g.edges.iter().enumerate() {
        if edges.insert(e.id.clone(), Edge { ends: e.ends.clone() }).is_some() {
            return Err(InputError::new(
                format!("{path}.edges[{k}].id"),
                format!("duplicate id {:?}", e.id),
            ));
        }
    }
    let mut points = BTreeMap::new();
    for (k, p) in g.points.iter().enumerate() {
        let mut markings = p.markings.clone();
        markings.sort_unstable();
        let point = MarkedPoint {
            vertex: p.vertex.clone(),
            markings,
        };
        if points.insert(p.id.clone(), point).is_some() {
            return Err(InputError::new(
                format!("{path}.points[{k}].id"),
                format!("duplicate id {:?}", p.id),
            ));
        }
    }
    let markings = g.markings.unwrap_or_else(|| {
        g.points
            .iter()
            .flat_map(|p| p.markings.iter().copied())
            .max()
            .unwrap_or(0)
    });
    let weights = g.weights.as_ref().map(|w| unq(w));
    MarkedDualGraph::from_parts(vertices, edges, points, markings, weights)
        .map_err(|e| InputError::new(path, e.to_string()))
}

pub fn graph_to_dto(g: &MarkedDualGraph) -> GraphDto {
    GraphDto {
        kind: default_graph(),
        vertices: g
            .vertices()
            .iter()
            .map(|(id, v)| VertexDto {
                id: id.clone(),
                genus: v.genus,
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|(id, e)| EdgeDto {
                id: id.clone(),
                ends: e.ends.clone(),
            })
            .collect(),
        points: g
            .points()
            .iter()
            .map(|(id, p)| PointDto {
                id: id.clone(),
                vertex: p.vertex.clone(),
                markings: p.markings.clone(),
            })
            .collect(),
        markings: Some(g.marking_count()),
        weights: g.weights().map(qs),
    }
}

pub fn glt_from_dto(path: &str, t: &GltDto, g: &MarkedDualGraph) -> Result<GltStructure, InputError> {
    let mut stalks = BTreeMap::new();
    for (p, m) in &t.stalks {
        stalks.insert(p.clone(), monoid_from_dto(&format!("{path}.stalks.{p}"), m)?);
    }
    let glt = GltStructure {
        node_index: t.node_index.clone(),
        stalks,
    };
    validate_glt(g, &glt).map_err(|e| InputError::new(path, e.to_string()))?;
    Ok(glt)
}

pub fn glt_to_dto(t: &GltStructure) -> GltDto {
    GltDto {
        kind: default_glt(),
        node_index: t.node_index.clone(),
        stalks: t.stalks.iter().map(|(p, m)| (p.clone(), monoid_to_dto(m))).collect(),
    }
}

fn ids_in(path: &str, ids: &[String], known: &BTreeMap<String, Vertex>) -> Result<BTreeSet<String>, InputError> {
    let mut out = BTreeSet::new();
    for (k, v) in ids.iter().enumerate() {
        if !known.contains_key(v) {
            return Err(InputError::new(format!("{path}[{k}]"), format!("unknown vertex {v:?}")));
        }
        out.insert(v.clone());
    }
    Ok(out)
}

pub fn plan_to_dto(collapsed: &BTreeSet<String>) -> PlanDto {
    PlanDto {
        kind: default_plan(),
        collapsed: collapsed.iter().cloned().collect(),
    }
}

pub fn decoration_to_dto(d: &MapDecoration) -> DecorationDto {
    DecorationDto {
        kind: default_decoration(),
        contracted: d.contracted.iter().cloned().collect(),
    }
}

fn submonoid_from_dto(path: &str, s: &SubmonoidDto) -> Result<SubmonoidPresentation, InputError> {
    Ok(SubmonoidPresentation {
        torsion: group_from(&format!("{path}.torsion"), &s.torsion)?,
        generators: s.generators.clone(),
        unit: s.unit.clone(),
    })
}

fn submonoid_to_dto(s: &SubmonoidPresentation) -> SubmonoidDto {
    SubmonoidDto {
        kind: default_submonoid(),
        torsion: s.torsion.invariant_factors().to_vec(),
        generators: s.generators.clone(),
        unit: s.unit.clone(),
    }
}

fn coarse_from_dto(path: &str, c: &CoarseDto, g: &MarkedDualGraph) -> Result<CoarseData, InputError> {
    for p in c.subgroups.keys() {
        if !g.points().contains_key(p) {
            return Err(InputError::new(
                format!("{path}.subgroups.{p}"),
                format!("unknown point {p:?}"),
            ));
        }
    }
    for e in c.divisors.keys() {
        if !g.edges().contains_key(e) {
            return Err(InputError::new(
                format!("{path}.divisors.{e}"),
                format!("unknown edge {e:?}"),
            ));
        }
    }
    Ok(CoarseData {
        subgroups: c
            .subgroups
            .iter()
            .map(|(p, vs)| (p.clone(), vs.iter().map(|v| unq(v)).collect()))
            .collect(),
        divisors: c.divisors.clone(),
    })
}

fn coarse_to_dto(c: &CoarseData) -> CoarseDto {
    CoarseDto {
        kind: default_coarse(),
        subgroups: c
            .subgroups
            .iter()
            .map(|(p, vs)| (p.clone(), vs.iter().map(|v| qs(v)).collect()))
            .collect(),
        divisors: c.divisors.clone(),
    }
}

fn query_from_dto(q: &QueryDto) -> Result<Query, InputError> {
    Ok(Query {
        vector: q.vector.as_ref().map(|v| unq(v)),
        indices: q.indices.clone(),
        id: q.id.clone(),
        marking: q.marking,
        group: q.group.as_ref().map(|f| group_from("query.group", f)).transpose()?,
        multiplicity: q.multiplicity,
        summands: q.summands.clone(),
    })
}

fn query_to_dto(q: &Query) -> QueryDto {
    QueryDto {
        kind: default_query(),
        vector: q.vector.as_ref().map(|v| qs(v)),
        indices: q.indices.clone(),
        id: q.id.clone(),
        marking: q.marking,
        group: q.group.as_ref().map(|g| g.invariant_factors().to_vec()),
        multiplicity: q.multiplicity,
        summands: q.summands.clone(),
    }
}

fn needs<T>(section: &Option<T>, what: &str, name: &str) -> Result<(), InputError> {
    match section {
        Some(_) => Ok(()),
        None => Err(InputError::new(name, format!("section required by {what}"))),
    }
}

pub fn document_from_dto(d: &DocumentDto) -> Result<Document, InputError> {
    let graph = d.graph.as_ref().map(|g| graph_from_dto("graph", g)).transpose()?;
    let other_graph = d
        .other_graph
        .as_ref()
        .map(|g| graph_from_dto("other-graph", g))
        .transpose()?;
    if d.glt_structure.is_some() || d.plan.is_some() || d.decoration.is_some() || d.coarse_data.is_some() {
        needs(&graph, "graph-attached sections", "graph")?;
    }
    if d.other_glt_structure.is_some() {
        needs(&other_graph, "other-glt-structure", "other-graph")?;
    }
    let glt = match (&d.glt_structure, &graph) {
        (Some(t), Some(g)) => Some(glt_from_dto("glt-structure", t, g)?),
        _ => None,
    };
    let other_glt = match (&d.other_glt_structure, &other_graph) {
        (Some(t), Some(g)) => Some(glt_from_dto("other-glt-structure", t, g)?),
        _ => None,
    };
    // The target structure lives on the contracted graph; it is checked by the command.
    let target_glt = d
        .target_glt_structure
        .as_ref()
        .map(|t| -> Result<GltStructure, InputError> {
            let mut stalks = BTreeMap::new();
            for (p, m) in &t.stalks {
                stalks.insert(
                    p.clone(),
                    monoid_from_dto(&format!("target-glt-structure.stalks.{p}"), m)?,
                );
            }
            Ok(GltStructure {
                node_index: t.node_index.clone(),
                stalks,
            })
        })
        .transpose()?;
    let plan = match (&d.plan, &graph) {
        (Some(p), Some(g)) => Some(ids_in("plan.collapsed", &p.collapsed, g.vertices())?),
        _ => None,
    };
    let decoration = match (&d.decoration, &graph) {
        (Some(p), Some(g)) => Some(MapDecoration {
            contracted: ids_in("decoration.contracted", &p.contracted, g.vertices())?,
        }),
        _ => None,
    };
    let coarse = match (&d.coarse_data, &graph) {
        (Some(c), Some(g)) => Some(coarse_from_dto("coarse-data", c, g)?),
        _ => None,
    };
    Ok(Document {
        monoid: d.monoid.as_ref().map(|m| monoid_from_dto("monoid", m)).transpose()?,
        other_monoid: d
            .other_monoid
            .as_ref()
            .map(|m| monoid_from_dto("other-monoid", m))
            .transpose()?,
        local_monoid: d
            .local_monoid
            .as_ref()
            .map(|m| local_from_dto("local-monoid", m))
            .transpose()?,
        graph,
        glt,
        other_graph,
        other_glt,
        target_glt,
        plan,
        decoration,
        submonoid: d
            .submonoid
            .as_ref()
            .map(|s| submonoid_from_dto("submonoid", s))
            .transpose()?,
        coarse,
        query: d.query.as_ref().map(query_from_dto).transpose()?,
    })
}

pub fn document_to_dto(d: &Document) -> DocumentDto {
    DocumentDto {
        kind: default_document(),
        monoid: d.monoid.as_ref().map(monoid_to_dto),
        other_monoid: d.other_monoid.as_ref().map(monoid_to_dto),
        local_monoid: d.local_monoid.as_ref().map(local_to_dto),
        graph: d.graph.as_ref().map(graph_to_dto),
        glt_structure: d.glt.as_ref().map(glt_to_dto),
        other_graph: d.other_graph.as_ref().map(graph_to_dto),
        other_glt_structure: d.other_glt.as_ref().map(glt_to_dto),
        target_glt_structure: d.target_glt.as_ref().map(glt_to_dto),
        plan: d.plan.as_ref().map(plan_to_dto),
        decoration: d.decoration.as_ref().map(decoration_to_dto),
        submonoid: d.submonoid.as_ref().map(submonoid_to_dto),
        coarse_data: d.coarse.as_ref().map(coarse_to_dto),
        query: d.query.as_ref().map(query_to_dto),
    }
}

/// Pretty JSON with keys sorted at every level and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v: Value = serde_json::to_value(value).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn serialize_document(d: &Document) -> String {
    to_canonical_json(&document_to_dto(d))
}
