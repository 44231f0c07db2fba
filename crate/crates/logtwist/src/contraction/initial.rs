//! Initial contractions and the contraction-validity check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{contract, CollapsedComponent, ComponentKind, Contraction, ContractionError, ContractionPlan};
use crate::admissible::{AdmissibleGroup, AdmissibleMonoid};
use crate::curve::{validate_glt, GltStructure};
use crate::lattice::{hermite_normal_form, integer_kernel, lattice_intersection, IntMatrix, Rational};

/// The universal structure on the target of a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialContraction {
    pub contraction: Contraction,
    pub glt: GltStructure,
}

/// Target node index `gcd{c_j : j ∈ E*}`; target stalk at a merged point `y`:
/// `v|_{I_x} ∈ N_x` for every source point `x` over `y`, and
/// `Σ_{i : ν ∈ E^i} v_i ∈ (1/c_ν)Z` for every collapsed node `ν`.
pub fn initial_contraction(glt: &GltStructure, plan: &ContractionPlan) -> Result<InitialContraction, ContractionError> {
    let src = plan.source();
    validate_glt(src, glt)?;
    let contraction = contract(plan)?;
    let mut node_index = BTreeMap::new();
    for e in src.edges().keys() {
        if contraction.target.edges().contains_key(e) && !is_merged_edge(plan, e) {
            node_index.insert(e.clone(), glt.node_index[e]);
        }
    }
    let mut stalks = BTreeMap::new();
    for (id, p) in src.points() {
        if plan.component_of(&p.vertex).is_none() {
            stalks.insert(id.clone(), glt.stalks[id].clone());
        }
    }
    for c in plan.components() {
        match c.kind {
            ComponentKind::Bridge => {
                let g = plan
                    .bridge_path(c)
                    .iter()
                    .fold(0u64, |acc, s| acc.gcd(&glt.node_index[&s.edge]));
                node_index.insert(plan.merged_edge_id(c), g);
            }
            ComponentKind::Tail => {
                if let Some(pid) = plan.merged_point_id(c) {
                    stalks.insert(pid, merged_stalk(glt, plan, c));
                }
            }
        }
    }
    let out = GltStructure { node_index, stalks };
    validate_glt(&contraction.target, &out)?;
    Ok(InitialContraction { contraction, glt: out })
}

fn is_merged_edge(plan: &ContractionPlan, e: &str) -> bool {
    plan.components()
        .iter()
        .any(|c| c.kind == ComponentKind::Bridge && plan.merged_edge_id(c) == e)
}

/// Stalk of the initial structure at the point a marked tail contracts to.
fn merged_stalk(glt: &GltStructure, plan: &ContractionPlan, c: &CollapsedComponent) -> AdmissibleMonoid {
    let src = plan.source();
    let mut markings: Vec<usize> = c.vertices.iter().flat_map(|v| src.markings_on(v)).collect();
    markings.sort_unstable();
    let k = markings.len();
    let pos = |i: usize| markings.binary_search(&i).expect("marking in fiber");

    let points: Vec<(&Vec<usize>, &AdmissibleMonoid)> = c
        .vertices
        .iter()
        .flat_map(|v| src.points_on(v))
        .map(|(id, p)| (&p.markings, &glt.stalks[id]))
        .collect();
    // S_ν for each collapsed node ν.
    let mut support: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for e in c.internal_edges.iter().chain(c.attachments.iter().map(|a| &a.edge)) {
        support.insert(e.clone(), Vec::new());
    }
    for &i in &markings {
        let v = &src.points()[src.point_of_marking(i).expect("marking placed")].vertex;
        for step in plan.tail_path(c, v) {
            support.get_mut(&step.edge).expect("edge in fiber").push(i);
        }
    }
    let l = support
        .keys()
        .map(|e| BigInt::from(glt.node_index[e]))
        .chain(points.iter().map(|(_, m)| m.group().denominator().clone()))
        .fold(BigInt::from(1), |acc, x| acc.lcm(&x));

    let mut lattice = IntMatrix::identity(k);
    for (ix, m) in &points {
        let g = m.group();
        let scale = &l / g.denominator();
        let mut rows: Vec<Vec<BigInt>> = g
            .lattice()
            .to_rows()
            .into_iter()
            .map(|r| {
                let mut w = vec![BigInt::zero(); k];
                for (x, &i) in r.iter().zip(ix.iter()) {
                    w[pos(i)] = x * &scale;
                }
                w
            })
            .collect();
        for (j, &i) in markings.iter().enumerate() {
            if !ix.contains(&i) {
                let mut w = vec![BigInt::zero(); k];
                w[j] = BigInt::from(1);
                rows.push(w);
            }
        }
        lattice = lattice_intersection(&lattice, &hermite_normal_form(&IntMatrix::from_rows(rows, k)));
    }
    for (e, s) in &support {
        if s.is_empty() {
            continue;
        }
        let modulus = &l / BigInt::from(glt.node_index[e]);
        let mut row = vec![BigInt::zero(); k + 1];
        for &i in s {
            row[pos(i)] = BigInt::from(1);
        }
        row[k] = modulus;
        let ker = integer_kernel(&IntMatrix::from_rows(vec![row], k + 1));
        let rows: Vec<Vec<BigInt>> = ker.to_rows().into_iter().map(|r| r[..k].to_vec()).collect();
        let cong = hermite_normal_form(&IntMatrix::from_rows(rows, k));
        lattice = lattice_intersection(&lattice, &cong);
    }
    let lq = Rational::from_integer(l);
    let gens: Vec<Vec<Rational>> = lattice
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::from_integer(x) / &lq).collect())
        .collect();
    AdmissibleMonoid::from_group(AdmissibleGroup::new(k, &gens).expect("ranks agree"))
}

/// Outcome of the validity check, with a reason per failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GltContractionCheck {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Whether `target` on the plan's target graph is a contraction of `source`:
/// (a) each target node index divides the initial one, and
/// (b) each target stalk is contained in the initial stalk.
pub fn is_glt_contraction(
    source: &GltStructure,
    plan: &ContractionPlan,
    target: &GltStructure,
) -> Result<GltContractionCheck, ContractionError> {
    let init = initial_contraction(source, plan)?;
    validate_glt(&init.contraction.target, target)?;
    let mut failures = Vec::new();
    for (e, &d) in &target.node_index {
        let g = init.glt.node_index[e];
        if g % d != 0 {
            failures.push(format!("node {e}: index {d} does not divide {g}"));
        }
    }
    for (p, m) in &target.stalks {
        let bound = &init.glt.stalks[p];
        if !m.is_contained(bound)? {
            failures.push(format!("point {p}: stalk {m} is not contained in {bound}"));
        }
    }
    Ok(GltContractionCheck {
        valid: failures.is_empty(),
        failures,
    })
}
