//! Counting admissible structures with a prescribed local monoid.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::ContractionError;
use crate::admissible::AdmissibleMonoid;
use crate::lattice::{FiniteAbelianGroup, Rational};
use crate::local::{LocalError, LocalMonoid};

/// Enumeration runs only when `exp(A)^n · |A|` is at most this.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Cap on `|A|^n` for the exact-realization enumeration.
const EXACT_CAP: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    /// `|A|^{n−1} = |Ext^1(A, K)|`.
    pub predicted: BigInt,
    /// Brute-force size of the fiber of `Σ : Hom(A, (Q/Z)^n) → Hom(A, Q/Z)` over the class of `D`.
    pub enumerated: Option<BigInt>,
    /// True when the enumeration ran and matched the prediction.
    pub verified: bool,
    /// Admissible monoids whose pushout equals `D` exactly under the identification with `A`,
    /// when `|A|^n` is small enough to enumerate.
    pub exact_realizations: Option<Vec<AdmissibleMonoid>>,
}

/// Counts extensions of `A` by `Z^n` lying over the extension class of `D`.
pub fn count_structures(
    a: &FiniteAbelianGroup,
    n: usize,
    d: &LocalMonoid,
    cap: u64,
) -> Result<CountReport, ContractionError> {
    if n == 0 {
        return Err(ContractionError::ZeroMultiplicity);
    }
    if d.group() != a {
        return Err(LocalError::GroupMismatch {
            left: d.group().clone(),
            right: a.clone(),
        }
        .into());
    }
    d.validate().map_err(LocalError::InvalidCocycle)?;
    let predicted = BigInt::from(a.order()).pow(n as u32 - 1);

    let targets = extension_character(d);
    let Some(per_generator) = fiber(a, n, &targets, cap) else {
        return Ok(CountReport {
            predicted,
            enumerated: None,
            verified: false,
            exact_realizations: None,
        });
    };
    let enumerated: BigInt = per_generator.iter().map(|c| BigInt::from(c.len())).product();
    let verified = enumerated == predicted;

    let full = (a.order() as u128).checked_pow(n as u32);
    let exact_realizations = if full.map_or(false, |f| f <= EXACT_CAP as u128) {
        Some(exact_realizations(a, n, d, &per_generator))
    } else {
        None
    };
    Ok(CountReport {
        predicted,
        enumerated: Some(enumerated),
        verified,
        exact_realizations,
    })
}

/// `χ_D(g_k) = s_k / d_k` where `d_k·(0, g_k) = (s_k, 0)`, as the numerators `s_k mod d_k`.
pub fn extension_character(d: &LocalMonoid) -> Vec<u64> {
    let a = d.group();
    (0..a.ngens())
        .map(|k| {
            let g = a.generator(k);
            let mut acc = (0u64, a.zero());
            for _ in 0..a.invariant_factors()[k] {
                acc = d.add(&acc, &(0, g.clone()));
            }
            debug_assert_eq!(acc.1, a.zero());
            acc.0 % a.invariant_factors()[k]
        })
        .collect()
}

/// Size of the fiber of `Σ : Hom(A, (Q/Z)^n) → Hom(A, Q/Z)` over the character with
/// numerators `targets`, by enumeration; `None` when `exp(A)^n · |A|` exceeds `cap`.
pub fn fiber_size(a: &FiniteAbelianGroup, n: usize, targets: &[u64], cap: u64) -> Option<BigInt> {
    fiber(a, n, targets, cap).map(|f| f.iter().map(|c| BigInt::from(c.len())).product())
}

/// `Hom(A, M) = Π_k M[d_k]`, so the fiber splits into one solution set per generator.
fn fiber(a: &FiniteAbelianGroup, n: usize, targets: &[u64], cap: u64) -> Option<Vec<Vec<Vec<u64>>>> {
    let size = (a.exponent() as u128)
        .checked_pow(n as u32)
        .map(|x| x * a.order() as u128);
    if size.map_or(true, |s| s > cap as u128) {
        return None;
    }
    Some(
        a.invariant_factors()
            .iter()
            .zip(targets)
            .map(|(&dk, &s)| {
                let box_group = FiniteAbelianGroup::new(vec![dk; n]).expect("chain of equal factors");
                box_group
                    .elements()
                    .into_iter()
                    .filter(|x| x.iter().sum::<u64>() % dk == s % dk)
                    .collect()
            })
            .collect(),
    )
}

fn exact_realizations(
    a: &FiniteAbelianGroup,
    n: usize,
    d: &LocalMonoid,
    per_generator: &[Vec<Vec<u64>>],
) -> Vec<AdmissibleMonoid> {
    let e = a.exponent();
    let els = a.elements();
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_generator.len()];
    if per_generator.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        // ψ(θ)_i in units of 1/e.
        let psi: Vec<Vec<u64>> = els
            .iter()
            .map(|t| {
                (0..n)
                    .map(|i| {
                        let mut acc = 0u128;
                        for (k, &dk) in a.invariant_factors().iter().enumerate() {
                            acc += t[k] as u128 * per_generator[k][choice[k]][i] as u128 * (e / dk) as u128;
                        }
                        (acc % e as u128) as u64
                    })
                    .collect()
            })
            .collect();
        let injective = psi.iter().skip(1).all(|v| v.iter().any(|&x| x != 0));
        let matches = injective
            && (0..els.len()).all(|s| {
                (0..els.len()).all(|t| {
                    let c: u64 = psi[s].iter().zip(&psi[t]).map(|(x, y)| u64::from(x + y >= e)).sum();
                    c == d.carry_at(s, t)
                })
            });
        if matches {
            let gens: Vec<Vec<Rational>> = (0..a.ngens())
                .map(|k| {
                    let dk = a.invariant_factors()[k];
                    per_generator[k][choice[k]]
                        .iter()
                        .map(|&x| Rational::new(BigInt::from(x), BigInt::from(dk)))
                        .collect()
                })
                .collect();
            let m = AdmissibleMonoid::new(n, &gens).expect("ranks agree");
            if found.insert(m.generators()) {
                out.push(m);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < per_generator[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
