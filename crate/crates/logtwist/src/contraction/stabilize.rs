//! Weighted stabilization by repeated contraction of unstable contracted components.

use std::collections::BTreeSet;

use super::{contract, Contraction, ContractionError, ContractionPlan};
use crate::curve::{is_of_stable_type, is_stable, GraphError, MapDecoration, MarkedDualGraph};
use crate::lattice::format_rational;

/// Result of stabilization: the all-at-once plan on the source and its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub plan: ContractionPlan,
    pub contraction: Contraction,
    /// Vertices in the order they were contracted.
    pub order: Vec<String>,
    /// Decoration restricted to the surviving vertices.
    pub decoration: MapDecoration,
}

/// Stabilizes, always contracting the first violator in id order.
pub fn stabilize(g: &MarkedDualGraph, d: &MapDecoration) -> Result<Stabilization, ContractionError> {
    stabilize_with_order(g, d, |_| 0)
}

/// Stabilizes, letting `choose` pick which current violator to contract next.
pub fn stabilize_with_order(
    g: &MarkedDualGraph,
    d: &MapDecoration,
    mut choose: impl FnMut(&[String]) -> usize,
) -> Result<Stabilization, ContractionError> {
    if !is_of_stable_type(g)? {
        return Err(GraphError::NotOfStableType(format_rational(&g.stability_number()?)).into());
    }
    let mut current = g.clone();
    let mut decoration = d.clone();
    let mut order = Vec::new();
    loop {
        let report = is_stable(&current, &decoration)?;
        if report.stable {
            break;
        }
        let v = report.violators[choose(&report.violators) % report.violators.len()].clone();
        let step = ContractionPlan::new(&current, BTreeSet::from([v.clone()]))?;
        current = contract(&step)?.target;
        // Surviving vertices keep their ids, so flags carry over unchanged.
        decoration.contracted.remove(&v);
        order.push(v);
    }
    let plan = ContractionPlan::new(g, order.iter().cloned().collect())?;
    let contraction = contract(&plan)?;
    if contraction.target != current {
        return Err(ContractionError::Mismatch(
            "stepwise and all-at-once stabilization disagree".into(),
        ));
    }
    Ok(Stabilization {
        plan,
        contraction,
        order,
        decoration,
    })
}
