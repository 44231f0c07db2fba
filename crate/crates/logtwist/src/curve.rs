//! Dual graphs of marked prestable curves, generalized log twisted structures on them,
//! stabilizers, local charts and weighted stability.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::admissible::AdmissibleMonoid;
use crate::lattice::{format_rational, FiniteAbelianGroup, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("id {0:?} is used more than once")]
    DuplicateId(String),
    #[error("{owner:?} refers to unknown vertex {vertex:?}")]
    UnknownVertex { owner: String, vertex: String },
    #[error("point {point:?} sits on node {edge:?}; marked points must be smooth")]
    MarkingOnNode { point: String, edge: String },
    #[error("graph is disconnected: {0:?} is unreachable")]
    Disconnected(String),
    #[error("marking {0} is out of range")]
    MarkingOutOfRange(usize),
    #[error("marking {0} appears at more than one point")]
    MarkingRepeated(usize),
    #[error("marking {0} appears at no point")]
    MarkingMissing(usize),
    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("weight of marking {index} is {value}, outside (0, 1]")]
    WeightOutOfRange { index: usize, value: String },
    #[error("weights at point {point:?} sum to {sum} > 1")]
    WeightOverflow { point: String, sum: String },
    #[error("weights are required")]
    MissingWeights,
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("2g - 2 + Σa = {0} is not positive")]
    NotOfStableType(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub genus: u32,
}

/// A node. `ends[0] == ends[1]` for a loop; the slot index names the branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub ends: [String; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to slot `slot`.
    pub fn other(&self, slot: usize) -> &str {
        &self.ends[1 - slot]
    }

    /// Slot of `v`, the first one for loops.
    pub fn slot_of(&self, v: &str) -> Option<usize> {
        self.ends.iter().position(|e| e == v)
    }
}

/// A smooth point carrying the markings in `markings` (sorted, nonempty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedPoint {
    pub vertex: String,
    pub markings: Vec<usize>,
}

/// Connected dual graph with marked points; markings `1..=n` each occur at exactly one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDualGraph {
    vertices: BTreeMap<String, Vertex>,
    edges: BTreeMap<String, Edge>,
    points: BTreeMap<String, MarkedPoint>,
    markings: usize,
    weights: Option<Vec<Rational>>,
}

/// Accumulates graph data; [`build`](GraphBuilder::build) normalizes and validates.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String, String)>,
    points: Vec<(String, String, Vec<usize>)>,
    markings: Option<usize>,
    weights: Option<Vec<Rational>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str, genus: u32) -> Self {
        self.vertices.push((id.into(), genus));
        self
    }

    pub fn edge(mut self, id: &str, a: &str, b: &str) -> Self {
        self.edges.push((id.into(), a.into(), b.into()));
        self
    }

    pub fn point(mut self, id: &str, vertex: &str, markings: &[usize]) -> Self {
        self.points.push((id.into(), vertex.into(), markings.to_vec()));
        self
    }

    /// Total marking count; defaults to the largest marking used.
    pub fn markings(mut self, n: usize) -> Self {
        self.markings = Some(n);
        self
    }

    pub fn weights(mut self, w: Vec<Rational>) -> Self {
        self.weights = Some(w);
        self
    }

    pub fn build(self) -> Result<MarkedDualGraph, GraphError> {
        let mut ids = BTreeSet::new();
        let mut claim = |id: &str| -> Result<(), GraphError> {
            if ids.insert(id.to_string()) {
                Ok(())
            } else {
                Err(GraphError::DuplicateId(id.to_string()))
            }
        };
        let mut vertices = BTreeMap::new();
        for (id, genus) in self.vertices {
            claim(&id)?;
            vertices.insert(id, Vertex { genus });
        }
        let mut edges = BTreeMap::new();
        for (id, a, b) in self.edges {
            claim(&id)?;
            edges.insert(id, Edge { ends: [a, b] });
        }
        let mut points = BTreeMap::new();
        for (id, vertex, mut markings) in self.points {
            claim(&id)?;
            if markings.is_empty() {
                continue;
            }
            markings.sort_unstable();
            points.insert(id, MarkedPoint { vertex, markings });
        }
        let markings = self.markings.unwrap_or_else(|| {
            points
                .values()
                .flat_map(|p| p.markings.iter().copied())
                .max()
                .unwrap_or(0)
        });
        let g = MarkedDualGraph {
            vertices,
            edges,
            points,
            markings,
            weights: self.weights,
        };
        g.validate()?;
        Ok(g)
    }
}

impl MarkedDualGraph {
    /// Assembles already-normalized parts and validates them.
    pub fn from_parts(
        vertices: BTreeMap<String, Vertex>,
        edges: BTreeMap<String, Edge>,
        points: BTreeMap<String, MarkedPoint>,
        markings: usize,
        weights: Option<Vec<Rational>>,
    ) -> Result<Self, GraphError> {
        let points = points.into_iter().filter(|(_, p)| !p.markings.is_empty()).collect();
        let g = MarkedDualGraph {
            vertices,
            edges,
            points,
            markings,
            weights,
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        for (id, e) in &self.edges {
            if self.vertices.contains_key(id) || self.points.contains_key(id) {
                return Err(GraphError::DuplicateId(id.clone()));
            }
            for v in &e.ends {
                if !self.vertices.contains_key(v) {
                    return Err(GraphError::UnknownVertex {
                        owner: id.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
        for (id, p) in &self.points {
            if self.vertices.contains_key(id) {
                return Err(GraphError::DuplicateId(id.clone()));
            }
            if !self.vertices.contains_key(&p.vertex) {
                if self.edges.contains_key(&p.vertex) {
                    return Err(GraphError::MarkingOnNode {
                        point: id.clone(),
                        edge: p.vertex.clone(),
                    });
                }
                return Err(GraphError::UnknownVertex {
                    owner: id.clone(),
                    vertex: p.vertex.clone(),
                });
            }
        }
        let start = self.vertices.keys().next().expect("nonempty");
        let reached = self.reachable(start, &BTreeSet::new());
        if let Some(v) = self.vertices.keys().find(|v| !reached.contains(*v)) {
            return Err(GraphError::Disconnected(v.clone()));
        }
        let mut seen = vec![false; self.markings + 1];
        for p in self.points.values() {
            for &i in &p.markings {
                if i == 0 || i > self.markings {
                    return Err(GraphError::MarkingOutOfRange(i));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(GraphError::MarkingRepeated(i));
                }
            }
        }
        if let Some(i) = (1..=self.markings).find(|&i| !seen[i]) {
            return Err(GraphError::MarkingMissing(i));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.markings {
                return Err(GraphError::WeightCount {
                    expected: self.markings,
                    found: w.len(),
                });
            }
            for (k, a) in w.iter().enumerate() {
                if !a.is_positive() || *a > Rational::one() {
                    return Err(GraphError::WeightOutOfRange {
                        index: k + 1,
                        value: format_rational(a),
                    });
                }
            }
            for (id, p) in &self.points {
                let s: Rational = p.markings.iter().map(|&i| w[i - 1].clone()).sum();
                if s > Rational::one() {
                    return Err(GraphError::WeightOverflow {
                        point: id.clone(),
                        sum: format_rational(&s),
                    });
                }
            }
        }
        Ok(())
    }

    /// Vertices reachable from `start` without entering `blocked`.
    pub fn reachable(&self, start: &str, blocked: &BTreeSet<String>) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start.to_string()]);
        seen.insert(start.to_string());
        while let Some(v) = queue.pop_front() {
            for (_, e) in self.incident(&v) {
                for w in &e.ends {
                    if !blocked.contains(w) && seen.insert(w.clone()) {
                        queue.push_back(w.clone());
                    }
                }
            }
        }
        seen
    }

    pub fn vertices(&self) -> &BTreeMap<String, Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<String, Edge> {
        &self.edges
    }

    pub fn points(&self) -> &BTreeMap<String, MarkedPoint> {
        &self.points
    }

    pub fn marking_count(&self) -> usize {
        self.markings
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// `Σ g_v + |E| − |V| + 1`.
    pub fn genus(&self) -> u64 {
        let g: u64 = self.vertices.values().map(|v| u64::from(v.genus)).sum();
        g + self.edges.len() as u64 + 1 - self.vertices.len() as u64
    }

    /// Edges touching `v`; a loop is listed once.
    pub fn incident<'a>(&'a self, v: &'a str) -> impl Iterator<Item = (&'a String, &'a Edge)> + 'a {
        self.edges.iter().filter(move |(_, e)| e.ends.iter().any(|x| x == v))
    }

    /// Node branches at `v`; loops count twice.
    pub fn valence(&self, v: &str) -> usize {
        self.edges
            .values()
            .map(|e| e.ends.iter().filter(|x| *x == v).count())
            .sum()
    }

    /// Marked points on `v`.
    pub fn points_on<'a>(&'a self, v: &'a str) -> impl Iterator<Item = (&'a String, &'a MarkedPoint)> + 'a {
        self.points.iter().filter(move |(_, p)| p.vertex == v)
    }

    /// Sorted marking indices on `v`.
    pub fn markings_on(&self, v: &str) -> Vec<usize> {
        let mut m: Vec<usize> = self
            .points_on(v)
            .flat_map(|(_, p)| p.markings.iter().copied())
            .collect();
        m.sort_unstable();
        m
    }

    /// Sum of weights of markings on `v`.
    pub fn weight_on(&self, v: &str) -> Result<Rational, GraphError> {
        let w = self.weights.as_ref().ok_or(GraphError::MissingWeights)?;
        Ok(self.markings_on(v).iter().map(|&i| w[i - 1].clone()).sum())
    }

    /// The point carrying marking `i`.
    pub fn point_of_marking(&self, i: usize) -> Option<&String> {
        self.points
            .iter()
            .find(|(_, p)| p.markings.contains(&i))
            .map(|(id, _)| id)
    }

    /// `2g − 2 + Σ a_i`.
    pub fn stability_number(&self) -> Result<Rational, GraphError> {
        let w = self.weights.as_ref().ok_or(GraphError::MissingWeights)?;
        let s: Rational = w.iter().cloned().sum();
        Ok(Rational::from_integer((2 * self.genus() as i64 - 2).into()) + s)
    }
}

/// Which vertices the map contracts to points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapDecoration {
    pub contracted: BTreeSet<String>,
}

impl MapDecoration {
    /// Every vertex contracted, as for the constant map.
    pub fn all(g: &MarkedDualGraph) -> Self {
        MapDecoration {
            contracted: g.vertices.keys().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Contracted genus-0 vertices with `valence + Σ a ≤ 2`, in id order.
    pub violators: Vec<String>,
}

/// Weighted stability of a decorated graph.
pub fn is_stable(g: &MarkedDualGraph, d: &MapDecoration) -> Result<StabilityReport, GraphError> {
    g.weights.as_ref().ok_or(GraphError::MissingWeights)?;
    let two = Rational::from_integer(2.into());
    let mut violators = Vec::new();
    for (id, v) in &g.vertices {
        if !d.contracted.contains(id) || v.genus > 0 {
            continue;
        }
        let load = Rational::from_integer((g.valence(id) as i64).into()) + g.weight_on(id)?;
        if load <= two {
            violators.push(id.clone());
        }
    }
    Ok(StabilityReport {
        stable: violators.is_empty(),
        violators,
    })
}

/// Node indices and stalk monoids over a dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GltStructure {
    pub node_index: BTreeMap<String, u64>,
    /// Per point; coordinates follow the point's sorted marking list.
    pub stalks: BTreeMap<String, AdmissibleMonoid>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GltViolation {
    #[error("node {0:?} has no index")]
    MissingNodeIndex(String),
    #[error("node {0:?} has index 0")]
    ZeroNodeIndex(String),
    #[error("index given for unknown node {0:?}")]
    UnknownNode(String),
    #[error("point {0:?} has no stalk")]
    MissingStalk(String),
    #[error("stalk given for unknown point {0:?}")]
    UnknownPoint(String),
    #[error("stalk at {point:?} has rank {found}, point carries {expected} markings")]
    StalkRank {
        point: String,
        expected: usize,
        found: usize,
    },
}

impl GltStructure {
    /// All node indices 1 and all stalks `N^{I_p}`.
    pub fn untwisted(g: &MarkedDualGraph) -> Self {
        GltStructure {
            node_index: g.edges.keys().map(|e| (e.clone(), 1)).collect(),
            stalks: g
                .points
                .iter()
                .map(|(id, p)| (id.clone(), AdmissibleMonoid::free_integral(p.markings.len())))
                .collect(),
        }
    }
}

/// Checks that `glt` matches the graph's nodes and points.
pub fn validate_glt(g: &MarkedDualGraph, glt: &GltStructure) -> Result<(), GltViolation> {
    for e in g.edges.keys() {
        match glt.node_index.get(e) {
            None => return Err(GltViolation::MissingNodeIndex(e.clone())),
            Some(0) => return Err(GltViolation::ZeroNodeIndex(e.clone())),
            Some(_) => {}
        }
    }
    if let Some(e) = glt.node_index.keys().find(|e| !g.edges.contains_key(*e)) {
        return Err(GltViolation::UnknownNode(e.clone()));
    }
    for (id, p) in &g.points {
        let s = glt
            .stalks
            .get(id)
            .ok_or_else(|| GltViolation::MissingStalk(id.clone()))?;
        if s.rank() != p.markings.len() {
            return Err(GltViolation::StalkRank {
                point: id.clone(),
                expected: p.markings.len(),
                found: s.rank(),
            });
        }
    }
    if let Some(p) = glt.stalks.keys().find(|p| !g.points.contains_key(*p)) {
        return Err(GltViolation::UnknownPoint(p.clone()));
    }
    Ok(())
}

/// Character group of the stabilizer at a marked point.
pub fn point_stabilizer(
    g: &MarkedDualGraph,
    glt: &GltStructure,
    point: &str,
) -> Result<FiniteAbelianGroup, GraphError> {
    if !g.points.contains_key(point) {
        return Err(GraphError::UnknownId(point.into()));
    }
    let s = glt
        .stalks
        .get(point)
        .ok_or_else(|| GraphError::UnknownId(point.into()))?;
    Ok(s.stabilizer_group())
}

/// `Z/d_e` at a node.
pub fn edge_stabilizer(g: &MarkedDualGraph, glt: &GltStructure, edge: &str) -> Result<FiniteAbelianGroup, GraphError> {
    if !g.edges.contains_key(edge) {
        return Err(GraphError::UnknownId(edge.into()));
    }
    let d = glt
        .node_index
        .get(edge)
        .ok_or_else(|| GraphError::UnknownId(edge.into()))?;
    Ok(FiniteAbelianGroup::cyclic(*d))
}

/// Presentation data of the étale-local chart at a point or node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalChart {
    /// `Spec(R ⊗_{Z[N^I]} Z[N])` data at a marked point.
    Point {
        markings: Vec<usize>,
        monoid: AdmissibleMonoid,
        group: FiniteAbelianGroup,
    },
    /// Balanced `μ_d` node with branch weights `(1, d − 1)`.
    Node { index: u64, weights: (u64, u64) },
}

impl LocalChart {
    pub fn is_trivial(&self) -> bool {
        match self {
            LocalChart::Point { group, .. } => group.is_trivial(),
            LocalChart::Node { index, .. } => *index == 1,
        }
    }
}

impl fmt::Display for LocalChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalChart::Point {
                markings,
                monoid,
                group,
            } => {
                let m: Vec<String> = markings.iter().map(|i| i.to_string()).collect();
                write!(
                    f,
                    "point chart: markings {{{}}}, N = {monoid}, N^gp/Z^I = {group}",
                    m.join(", ")
                )
            }
            LocalChart::Node { index, weights } => {
                write!(
                    f,
                    "node chart: μ_{index} acting with weights ({}, {})",
                    weights.0, weights.1
                )
            }
        }
    }
}

/// Chart at the point or node with the given id.
pub fn local_chart(g: &MarkedDualGraph, glt: &GltStructure, id: &str) -> Result<LocalChart, GraphError> {
    if let Some(p) = g.points.get(id) {
        let monoid = glt
            .stalks
            .get(id)
            .ok_or_else(|| GraphError::UnknownId(id.into()))?
            .clone();
        return Ok(LocalChart::Point {
            markings: p.markings.clone(),
            group: monoid.stabilizer_group(),
            monoid,
        });
    }
    if g.edges.contains_key(id) {
        let d = *glt.node_index.get(id).ok_or_else(|| GraphError::UnknownId(id.into()))?;
        return Ok(LocalChart::Node {
            index: d,
            weights: (1 % d.max(1), d - 1),
        });
    }
    Err(GraphError::UnknownId(id.into()))
}

/// Label-preserving isomorphism between two structures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
    pub points: BTreeMap<String, String>,
}

/// Brute-force isomorphism preserving genus, marking labels, weights, node indices and stalks.
pub fn is_isomorphic(
    a: (&MarkedDualGraph, &GltStructure),
    b: (&MarkedDualGraph, &GltStructure),
) -> Option<GraphIsomorphism> {
    let (ga, ta) = a;
    let (gb, tb) = b;
    if ga.vertices.len() != gb.vertices.len()
        || ga.edges.len() != gb.edges.len()
        || ga.points.len() != gb.points.len()
        || ga.markings != gb.markings
        || ga.weights != gb.weights
    {
        return None;
    }
    // Points are forced by their marking sets.
    let mut points = BTreeMap::new();
    for (pa, p) in &ga.points {
        let (pb, q) = gb.points.iter().find(|(_, q)| q.markings == p.markings)?;
        if ta.stalks.get(pa) != tb.stalks.get(pb) {
            return None;
        }
        points.insert(pa.clone(), pb.clone());
        let _ = q;
    }
    let order: Vec<&String> = ga.vertices.keys().collect();
    let signature = |g: &MarkedDualGraph, v: &str| (g.vertices[v].genus, g.valence(v), g.markings_on(v));
    let mut assignment: Vec<&String> = Vec::new();
    let mut used = BTreeSet::new();
    fn indices_between(g: &MarkedDualGraph, t: &GltStructure, u: &str, v: &str) -> Vec<(u64, String)> {
        let mut out: Vec<(u64, String)> = g
            .edges
            .iter()
            .filter(|(_, e)| (e.ends[0] == u && e.ends[1] == v) || (e.ends[0] == v && e.ends[1] == u))
            .map(|(id, _)| (t.node_index.get(id).copied().unwrap_or(1), id.clone()))
            .collect();
        out.sort();
        out
    }
    fn extend<'a>(
        k: usize,
        order: &[&'a String],
        assignment: &mut Vec<&'a String>,
        used: &mut BTreeSet<&'a String>,
        ga: &'a MarkedDualGraph,
        gb: &'a MarkedDualGraph,
        ta: &GltStructure,
        tb: &GltStructure,
        signature: &dyn Fn(&MarkedDualGraph, &str) -> (u32, usize, Vec<usize>),
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in gb.vertices.keys() {
            if used.contains(w) || signature(ga, v) != signature(gb, w) {
                continue;
            }
            let consistent = (0..=k).all(|j| {
                let (u, x) = if j == k { (v, w) } else { (order[j], assignment[j]) };
                let ia: Vec<u64> = indices_between(ga, ta, u, v).into_iter().map(|p| p.0).collect();
                let ib: Vec<u64> = indices_between(gb, tb, x, w).into_iter().map(|p| p.0).collect();
                ia == ib
            });
            if !consistent {
                continue;
            }
            assignment.push(w);
            used.insert(w);
            if extend(k + 1, order, assignment, used, ga, gb, ta, tb, signature) {
                return true;
            }
            used.remove(w);
            assignment.pop();
        }
        false
    }
    if !extend(0, &order, &mut assignment, &mut used, ga, gb, ta, tb, &signature) {
        return None;
    }
    let vertices: BTreeMap<String, String> = order
        .iter()
        .zip(&assignment)
        .map(|(a, b)| ((*a).clone(), (*b).clone()))
        .collect();
    let mut edges = BTreeMap::new();
    for (i, u) in order.iter().enumerate() {
        for v in &order[i..] {
            let ea = indices_between(ga, ta, u, v);
            let eb = indices_between(gb, tb, &vertices[*u], &vertices[*v]);
            for (x, y) in ea.into_iter().zip(eb) {
                edges.insert(x.1, y.1);
            }
        }
    }
    if points
        .iter()
        .any(|(pa, pb)| vertices[&ga.points[pa].vertex] != gb.points[pb].vertex)
    {
        return None;
    }
    Some(GraphIsomorphism {
        vertices,
        edges,
        points,
    })
}

/// True when `g` satisfies `2g − 2 + Σ a > 0`.
pub fn is_of_stable_type(g: &MarkedDualGraph) -> Result<bool, GraphError> {
    Ok(g.stability_number()? > Rational::zero())
}

#[cfg(test)]
mod tests;
