//! Relative coarse structures: shrink stalks to a character subgroup and node indices to a divisor.

use std::collections::BTreeMap;

use super::ContractionError;
use crate::admissible::{AdmissibleGroup, AdmissibleMonoid};
use crate::curve::{validate_glt, GltStructure, MarkedDualGraph};
use crate::lattice::Rational;

/// `N†_x = {n ∈ N_x : n mod Z^{I_x} ∈ S_x}` with `S_x` generated by the given vectors, and
/// node index `e'_e`. Points and nodes not listed are unchanged.
pub fn relative_coarse(
    g: &MarkedDualGraph,
    glt: &GltStructure,
    subgroups: &BTreeMap<String, Vec<Vec<Rational>>>,
    divisors: &BTreeMap<String, u64>,
) -> Result<GltStructure, ContractionError> {
    validate_glt(g, glt)?;
    let mut out = glt.clone();
    for (p, gens) in subgroups {
        let stalk = glt
            .stalks
            .get(p)
            .ok_or_else(|| ContractionError::Mismatch(format!("unknown point {p:?}")))?;
        for v in gens {
            if !stalk.group().contains(v)? {
                return Err(ContractionError::NotASubgroup(p.clone()));
            }
        }
        let sub = AdmissibleGroup::new(stalk.rank(), gens)?;
        out.stalks.insert(p.clone(), AdmissibleMonoid::from_group(sub));
    }
    for (e, &d) in divisors {
        let index = *glt
            .node_index
            .get(e)
            .ok_or_else(|| ContractionError::Mismatch(format!("unknown node {e:?}")))?;
        if d == 0 || index % d != 0 {
            return Err(ContractionError::NotADivisor {
                edge: e.clone(),
                divisor: d,
                index,
            });
        }
        out.node_index.insert(e.clone(), d);
    }
    Ok(out)
}
