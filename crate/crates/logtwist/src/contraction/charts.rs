//! Characteristic-monoid charts of a contraction.
//!
//! Matrices are columns-are-images: column `j` holds the image of target generator `j`
//! written in source generators, so a composite `C_0 ← C_1 ← C_2` is the product `M_1 · M_2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{contract, ComponentKind, ContractionError, ContractionPlan, Image};
use crate::curve::MarkedDualGraph;
use crate::lattice::IntMatrix;

/// Generator of a base monoid (`Node`) or of a chart monoid (`Branch`, `Marking`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Node(String),
    Branch { edge: String, slot: usize, vertex: String },
    Marking(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Node(e) => write!(f, "e[{e}]"),
            Generator::Branch { edge, slot, vertex } => write!(f, "e[{edge}.{slot}@{vertex}]"),
            Generator::Marking(i) => write!(f, "s[{i}]"),
        }
    }
}

/// Integer matrix with generator labels on both axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMatrix {
    pub rows: Vec<Generator>,
    pub cols: Vec<Generator>,
    pub matrix: IntMatrix,
}

impl LabeledMatrix {
    fn new(rows: Vec<Generator>, cols: Vec<Generator>) -> Self {
        let matrix = IntMatrix::zeros(rows.len(), cols.len());
        LabeledMatrix { rows, cols, matrix }
    }

    fn bump(&mut self, row: &Generator, col: usize) {
        let r = self.rows.iter().position(|g| g == row).expect("row generator exists");
        let x = self.matrix.get(r, col) + BigInt::one();
        self.matrix.set(r, col, x);
    }

    /// Column of the given target generator.
    pub fn image(&self, col: &Generator) -> Option<Vec<BigInt>> {
        self.cols.iter().position(|g| g == col).map(|j| self.matrix.column(j))
    }

    /// Nonzero entries of a column as `(row generator, coefficient)`.
    pub fn image_terms(&self, col: &Generator) -> Option<Vec<(Generator, BigInt)>> {
        let c = self.image(col)?;
        Some(
            self.rows
                .iter()
                .cloned()
                .zip(c)
                .filter(|(_, x)| *x != BigInt::from(0))
                .collect(),
        )
    }

    pub fn compose(&self, next: &LabeledMatrix) -> Result<LabeledMatrix, ContractionError> {
        if self.cols != next.rows {
            return Err(ContractionError::Mismatch("chart labels do not chain".into()));
        }
        Ok(LabeledMatrix {
            rows: self.rows.clone(),
            cols: next.cols.clone(),
            matrix: self.matrix.mul(&next.matrix),
        })
    }

    /// Equality after putting the two branch columns of every loop in a fixed order.
    pub fn agrees_up_to_loop_orientation(&self, other: &LabeledMatrix) -> bool {
        self.rows == other.rows
            && self.cols.len() == other.cols.len()
            && self.canonical_columns() == other.canonical_columns()
    }

    fn canonical_columns(&self) -> Vec<(Generator, Vec<BigInt>)> {
        let mut loops: BTreeMap<String, Vec<Vec<BigInt>>> = BTreeMap::new();
        let mut out = Vec::new();
        for (j, g) in self.cols.iter().enumerate() {
            let col = self.matrix.column(j);
            if let Generator::Branch { edge, .. } = g {
                if self.is_loop(edge) {
                    loops.entry(edge.clone()).or_default().push(col);
                    continue;
                }
            }
            out.push((g.clone(), col));
        }
        for (edge, mut cols) in loops {
            cols.sort();
            for (slot, col) in cols.into_iter().enumerate() {
                out.push((
                    Generator::Branch {
                        edge: edge.clone(),
                        slot,
                        vertex: String::new(),
                    },
                    col,
                ));
            }
        }
        out
    }

    fn is_loop(&self, edge: &str) -> bool {
        let vs: Vec<&String> = self
            .cols
            .iter()
            .filter_map(|g| match g {
                Generator::Branch { edge: e, vertex, .. } if e == edge => Some(vertex),
                _ => None,
            })
            .collect();
        vs.len() == 2 && vs[0] == vs[1]
    }
}

/// Base map on node generators and chart map on branch and marking generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharMaps {
    pub base: LabeledMatrix,
    pub chart: LabeledMatrix,
}

fn node_generators(g: &MarkedDualGraph) -> Vec<Generator> {
    g.edges().keys().map(|e| Generator::Node(e.clone())).collect()
}

fn chart_generators(g: &MarkedDualGraph) -> Vec<Generator> {
    let mut out: Vec<Generator> = g
        .edges()
        .iter()
        .flat_map(|(id, e)| {
            (0..2).map(move |slot| Generator::Branch {
                edge: id.clone(),
                slot,
                vertex: e.ends[slot].clone(),
            })
        })
        .collect();
    out.extend((1..=g.marking_count()).map(Generator::Marking));
    out
}

fn branch(g: &MarkedDualGraph, edge: &str, vertex: &str) -> Generator {
    let e = &g.edges()[edge];
    let slot = e.slot_of(vertex).expect("vertex is an endpoint");
    Generator::Branch {
        edge: edge.to_string(),
        slot,
        vertex: vertex.to_string(),
    }
}

/// Charts of the contraction described by `plan`.
pub fn char_maps(plan: &ContractionPlan) -> Result<CharMaps, ContractionError> {
    let src = plan.source();
    let c = contract(plan)?;
    let tgt = &c.target;
    let mut base = LabeledMatrix::new(node_generators(src), node_generators(tgt));
    let mut chart = LabeledMatrix::new(chart_generators(src), chart_generators(tgt));
    let bridges: BTreeMap<String, &super::CollapsedComponent> = plan
        .components()
        .iter()
        .filter(|k| k.kind == ComponentKind::Bridge)
        .map(|k| (plan.merged_edge_id(k), k))
        .collect();

    for (j, col) in base.cols.clone().iter().enumerate() {
        let Generator::Node(e) = col else { unreachable!() };
        match bridges.get(e) {
            Some(k) => {
                for step in plan.bridge_path(k) {
                    base.bump(&Generator::Node(step.edge), j);
                }
            }
            None => base.bump(&Generator::Node(e.clone()), j),
        }
    }
    for (j, col) in chart.cols.clone().iter().enumerate() {
        match col {
            Generator::Branch { edge, slot, .. } => match bridges.get(edge) {
                Some(k) => {
                    for step in plan.bridge_path(k) {
                        let v = if *slot == 0 { &step.from } else { &step.to };
                        chart.bump(&branch(src, &step.edge, v), j);
                    }
                }
                None => chart.bump(
                    &Generator::Branch {
                        edge: edge.clone(),
                        slot: *slot,
                        vertex: src.edges()[edge].ends[*slot].clone(),
                    },
                    j,
                ),
            },
            Generator::Marking(i) => {
                chart.bump(col, j);
                let pid = src.point_of_marking(*i).expect("every marking has a point");
                let v = &src.points()[pid].vertex;
                if let Some(k) = plan.component_of(v) {
                    debug_assert!(matches!(c.vertex_map[v], Image::Point(_)));
                    for step in plan.tail_path(k, v) {
                        chart.bump(&branch(src, &step.edge, &step.to), j);
                    }
                }
            }
            Generator::Node(_) => unreachable!(),
        }
    }
    Ok(CharMaps { base, chart })
}

/// Charts of `C_0 → C_2` from charts of `C_0 → C_1` and `C_1 → C_2`.
pub fn compose_char_maps(first: &CharMaps, second: &CharMaps) -> Result<CharMaps, ContractionError> {
    Ok(CharMaps {
        base: first.base.compose(&second.base)?,
        chart: first.chart.compose(&second.chart)?,
    })
}
