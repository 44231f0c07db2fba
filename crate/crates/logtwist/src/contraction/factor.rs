//! Greedy factorization into rounds of rational tails followed by one round of bridges.

use std::collections::BTreeSet;

use super::{contract, ContractionError, ContractionPlan};

/// Single-step plans `C_0 → C_1 → ... → C_r`. Every step but the last contracts all
/// collapsed vertices of valence 1 in the current graph; the last contracts what remains,
/// which consists of rational bridges. An identity plan yields no steps.
pub fn greedy_factorization(plan: &ContractionPlan) -> Result<Vec<ContractionPlan>, ContractionError> {
    let mut steps = Vec::new();
    let mut current = plan.source().clone();
    let mut remaining: BTreeSet<String> = plan.collapsed().clone();
    while !remaining.is_empty() {
        let tails: BTreeSet<String> = remaining.iter().filter(|v| current.valence(v) == 1).cloned().collect();
        let chosen = if tails.is_empty() { remaining.clone() } else { tails };
        let step = ContractionPlan::new(&current, chosen.clone())?;
        current = contract(&step)?.target;
        for v in &chosen {
            remaining.remove(v);
        }
        steps.push(step);
    }
    Ok(steps)
}
