//! Contractions of marked dual graphs: plans, targets, factorization, stabilization,
//! characteristic charts, the Picard kernel of a tree fiber, initial contractions,
//! relative coarse structures and structure counting.

mod charts;
mod coarse;
mod count;
mod factor;
mod initial;
mod picard;
mod stabilize;

pub use charts::{char_maps, compose_char_maps, CharMaps, Generator, LabeledMatrix};
pub use coarse::relative_coarse;
pub use count::{count_structures, extension_character, fiber_size, CountReport, DEFAULT_ENUMERATION_CAP};
pub use factor::greedy_factorization;
pub use initial::{initial_contraction, is_glt_contraction, GltContractionCheck, InitialContraction};
pub use picard::{picard_kernel, picard_kernel_for_marking, PicardGenerator, PicardKernel, PicardTree};
pub use stabilize::{stabilize, stabilize_with_order, Stabilization};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;
use thiserror::Error;

use crate::admissible::AdmissibleError;
use crate::curve::{Edge, GltViolation, GraphError, MarkedDualGraph, MarkedPoint, Vertex};
use crate::lattice::{format_rational, Rational};
use crate::local::LocalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("collapsed vertex {0:?} is not in the graph")]
    UnknownVertex(String),
    #[error("the collapsed set must be a proper subset of the vertices")]
    CollapsesEverything,
    #[error("collapsed vertex {0:?} has positive genus")]
    PositiveGenus(String),
    #[error("collapsed component containing {0:?} is not a tree")]
    NotATree(String),
    #[error("collapsed component containing {vertex:?} has {count} attachment nodes, expected 1 or 2")]
    AttachmentCount { vertex: String, count: usize },
    #[error("collapsed component containing {0:?} attaches at two nodes but carries markings")]
    MarkedBridge(String),
    #[error("merged point {point:?} would carry weight {sum} > 1")]
    WeightOverflow { point: String, sum: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Glt(#[from] GltViolation),
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("vector at point {0:?} is not in its character group")]
    NotASubgroup(String),
    #[error("{divisor} does not divide the index {index} of node {edge:?}")]
    NotADivisor { edge: String, divisor: u64, index: u64 },
    #[error("plan and structure disagree: {0}")]
    Mismatch(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("marking multiplicity must be positive")]
    ZeroMultiplicity,
}

/// One branch of a node: `edge.ends[slot]` is the vertex it lies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub edge: String,
    pub slot: usize,
}

/// A node joining a collapsed component to the rest of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub edge: String,
    /// Endpoint inside the component.
    pub inner: String,
    /// Endpoint outside the component.
    pub outer: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// One attachment node: contracts to a smooth point.
    Tail,
    /// Two attachment nodes: contracts to a node.
    Bridge,
}

/// An edge of a path, traversed from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub edge: String,
    pub from: String,
    pub to: String,
}

/// A connected component of the collapsed locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedComponent {
    pub vertices: BTreeSet<String>,
    pub internal_edges: BTreeSet<String>,
    /// For bridges, ordered by `(outer, edge)`; that order names the target node's branches.
    pub attachments: Vec<Attachment>,
    pub kind: ComponentKind,
}

/// A validated set of collapsed vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    source: MarkedDualGraph,
    collapsed: BTreeSet<String>,
    components: Vec<CollapsedComponent>,
}

impl ContractionPlan {
    pub fn new(source: &MarkedDualGraph, collapsed: BTreeSet<String>) -> Result<Self, ContractionError> {
        for v in &collapsed {
            let vert = source
                .vertices()
                .get(v)
                .ok_or_else(|| ContractionError::UnknownVertex(v.clone()))?;
            if vert.genus > 0 {
                return Err(ContractionError::PositiveGenus(v.clone()));
            }
        }
        if !collapsed.is_empty() && collapsed.len() == source.vertices().len() {
            return Err(ContractionError::CollapsesEverything);
        }
        let mut components = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for start in &collapsed {
            if seen.contains(start) {
                continue;
            }
            let mut vertices = BTreeSet::new();
            let mut queue = VecDeque::from([start.clone()]);
            vertices.insert(start.clone());
            while let Some(v) = queue.pop_front() {
                for (_, e) in source.incident(&v) {
                    for w in &e.ends {
                        if collapsed.contains(w) && vertices.insert(w.clone()) {
                            queue.push_back(w.clone());
                        }
                    }
                }
            }
            seen.extend(vertices.iter().cloned());
            let mut internal_edges = BTreeSet::new();
            let mut attachments = Vec::new();
            for (id, e) in source.edges() {
                let inside = e.ends.iter().filter(|x| vertices.contains(*x)).count();
                match inside {
                    2 => {
                        internal_edges.insert(id.clone());
                    }
                    1 => {
                        let slot = usize::from(!vertices.contains(&e.ends[0]));
                        attachments.push(Attachment {
                            edge: id.clone(),
                            inner: e.ends[slot].clone(),
                            outer: e.ends[1 - slot].clone(),
                        });
                    }
                    _ => {}
                }
            }
            if internal_edges.len() + 1 != vertices.len() {
                return Err(ContractionError::NotATree(start.clone()));
            }
            attachments.sort_by(|a, b| (&a.outer, &a.edge).cmp(&(&b.outer, &b.edge)));
            let kind = match attachments.len() {
                1 => ComponentKind::Tail,
                2 => ComponentKind::Bridge,
                count => {
                    return Err(ContractionError::AttachmentCount {
                        vertex: start.clone(),
                        count,
                    })
                }
            };
            if kind == ComponentKind::Bridge && vertices.iter().any(|v| !source.markings_on(v).is_empty()) {
                return Err(ContractionError::MarkedBridge(start.clone()));
            }
            components.push(CollapsedComponent {
                vertices,
                internal_edges,
                attachments,
                kind,
            });
        }
        let plan = ContractionPlan {
            source: source.clone(),
            collapsed,
            components,
        };
        if let Some(w) = source.weights() {
            for c in plan.components.iter().filter(|c| c.kind == ComponentKind::Tail) {
                let sum: Rational = c
                    .vertices
                    .iter()
                    .flat_map(|v| source.markings_on(v))
                    .map(|i| w[i - 1].clone())
                    .sum();
                if sum > Rational::one() {
                    return Err(ContractionError::WeightOverflow {
                        point: plan.merged_point_id(c).unwrap_or_default(),
                        sum: format_rational(&sum),
                    });
                }
            }
        }
        Ok(plan)
    }

    /// The empty plan.
    pub fn identity(source: &MarkedDualGraph) -> Self {
        Self::new(source, BTreeSet::new()).expect("empty plan is valid")
    }

    pub fn source(&self) -> &MarkedDualGraph {
        &self.source
    }

    pub fn collapsed(&self) -> &BTreeSet<String> {
        &self.collapsed
    }

    pub fn components(&self) -> &[CollapsedComponent] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.collapsed.is_empty()
    }

    /// Component containing `v`, if collapsed.
    pub fn component_of(&self, v: &str) -> Option<&CollapsedComponent> {
        self.components.iter().find(|c| c.vertices.contains(v))
    }

    /// Path inside a component's tree from `a` to `b`.
    pub fn tree_path(&self, c: &CollapsedComponent, a: &str, b: &str) -> Vec<PathStep> {
        let mut parent: BTreeMap<String, (String, String)> = BTreeMap::new();
        let mut queue = VecDeque::from([a.to_string()]);
        let mut seen = BTreeSet::from([a.to_string()]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for (id, e) in self.source.incident(&v) {
                if !c.internal_edges.contains(id) {
                    continue;
                }
                let w = if e.ends[0] == v { &e.ends[1] } else { &e.ends[0] };
                if seen.insert(w.clone()) {
                    parent.insert(w.clone(), (v.clone(), id.clone()));
                    queue.push_back(w.clone());
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = b.to_string();
        while cur != a {
            let (p, e) = parent[&cur].clone();
            steps.push(PathStep {
                edge: e,
                from: p.clone(),
                to: cur,
            });
            cur = p;
        }
        steps.reverse();
        steps
    }

    /// `E*` of a bridge: attachment 0, the tree path, attachment 1, oriented from side 0.
    pub fn bridge_path(&self, c: &CollapsedComponent) -> Vec<PathStep> {
        let (a, b) = (&c.attachments[0], &c.attachments[1]);
        let mut steps = vec![PathStep {
            edge: a.edge.clone(),
            from: a.outer.clone(),
            to: a.inner.clone(),
        }];
        steps.extend(self.tree_path(c, &a.inner, &b.inner));
        steps.push(PathStep {
            edge: b.edge.clone(),
            from: b.inner.clone(),
            to: b.outer.clone(),
        });
        steps
    }

    /// `E^i` for a vertex `v` of a tail: attachment then the tree path to `v`, oriented away from the attachment.
    pub fn tail_path(&self, c: &CollapsedComponent, v: &str) -> Vec<PathStep> {
        let a = &c.attachments[0];
        let mut steps = vec![PathStep {
            edge: a.edge.clone(),
            from: a.outer.clone(),
            to: a.inner.clone(),
        }];
        steps.extend(self.tree_path(c, &a.inner, v));
        steps
    }

    /// Id of the target point of a marked tail: the least source point id in it.
    pub fn merged_point_id(&self, c: &CollapsedComponent) -> Option<String> {
        c.vertices
            .iter()
            .flat_map(|v| self.source.points_on(v).map(|(id, _)| id.clone()))
            .min()
    }

    /// Id of the target node of a bridge: the least edge id in `E*`.
    pub fn merged_edge_id(&self, c: &CollapsedComponent) -> String {
        self.bridge_path(c)
            .into_iter()
            .map(|s| s.edge)
            .min()
            .expect("E* is nonempty")
    }
}

/// Where a source object lands in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Vertex(String),
    Node(String),
    /// A smooth point; `None` when the point carries no marking.
    Point(Option<String>),
}

/// Target graph together with the correspondence from the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub target: MarkedDualGraph,
    pub vertex_map: BTreeMap<String, Image>,
    pub edge_map: BTreeMap<String, Image>,
    pub point_map: BTreeMap<String, String>,
}

/// Computes the target of a plan.
pub fn contract(plan: &ContractionPlan) -> Result<Contraction, ContractionError> {
    let g = &plan.source;
    let mut vertices: BTreeMap<String, Vertex> = BTreeMap::new();
    let mut vertex_map = BTreeMap::new();
    for (id, v) in g.vertices() {
        if !plan.collapsed.contains(id) {
            vertices.insert(id.clone(), v.clone());
            vertex_map.insert(id.clone(), Image::Vertex(id.clone()));
        }
    }
    let mut edges: BTreeMap<String, Edge> = BTreeMap::new();
    let mut edge_map = BTreeMap::new();
    for (id, e) in g.edges() {
        if !e.ends.iter().any(|x| plan.collapsed.contains(x)) {
            edges.insert(id.clone(), e.clone());
            edge_map.insert(id.clone(), Image::Node(id.clone()));
        }
    }
    let mut points: BTreeMap<String, MarkedPoint> = BTreeMap::new();
    let mut point_map = BTreeMap::new();
    for (id, p) in g.points() {
        if !plan.collapsed.contains(&p.vertex) {
            points.insert(id.clone(), p.clone());
            point_map.insert(id.clone(), id.clone());
        }
    }
    for c in &plan.components {
        let touched = c
            .internal_edges
            .iter()
            .cloned()
            .chain(c.attachments.iter().map(|a| a.edge.clone()));
        match c.kind {
            ComponentKind::Bridge => {
                let id = plan.merged_edge_id(c);
                let ends = [c.attachments[0].outer.clone(), c.attachments[1].outer.clone()];
                edges.insert(id.clone(), Edge { ends });
                for v in &c.vertices {
                    vertex_map.insert(v.clone(), Image::Node(id.clone()));
                }
                for e in touched {
                    edge_map.insert(e, Image::Node(id.clone()));
                }
            }
            ComponentKind::Tail => {
                let id = plan.merged_point_id(c);
                if let Some(pid) = &id {
                    let mut markings: Vec<usize> = c.vertices.iter().flat_map(|v| g.markings_on(v)).collect();
                    markings.sort_unstable();
                    points.insert(
                        pid.clone(),
                        MarkedPoint {
                            vertex: c.attachments[0].outer.clone(),
                            markings,
                        },
                    );
                    for v in &c.vertices {
                        for (src, _) in g.points_on(v) {
                            point_map.insert(src.clone(), pid.clone());
                        }
                    }
                }
                for v in &c.vertices {
                    vertex_map.insert(v.clone(), Image::Point(id.clone()));
                }
                for e in touched {
                    edge_map.insert(e, Image::Point(id.clone()));
                }
            }
        }
    }
    let target = MarkedDualGraph::from_parts(
        vertices,
        edges,
        points,
        g.marking_count(),
        g.weights().map(|w| w.to_vec()),
    )?;
    debug_assert_eq!(target.genus(), g.genus());
    Ok(Contraction {
        target,
        vertex_map,
        edge_map,
        point_map,
    })
}

#[cfg(test)]
mod tests;
