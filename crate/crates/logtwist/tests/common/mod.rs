#![allow(dead_code)]

use std::collections::BTreeSet;

use logtwist::admissible::{AdmissibleGroup, AdmissibleMonoid};
use logtwist::lattice::{frac, rat, Rational};
use proptest::prelude::*;

/// Generator lists for admissible monoids: rank `1..=max_rank`, each vector with a
/// common denominator `≤ max_den`, so every generator has order at most `max_den`.
pub fn generators(max_rank: usize, max_den: i64) -> impl Strategy<Value = (usize, Vec<Vec<Rational>>)> {
    (1..=max_rank).prop_flat_map(move |n| {
        let vector = (1i64..=max_den, prop::collection::vec(0i64..max_den, n))
            .prop_map(|(q, ps)| ps.into_iter().map(|p| rat(p % q, q)).collect::<Vec<_>>());
        (Just(n), prop::collection::vec(vector, 0..=3))
    })
}

pub fn monoid(max_rank: usize, max_den: i64) -> impl Strategy<Value = AdmissibleMonoid> {
    generators(max_rank, max_den).prop_map(|(n, g)| AdmissibleMonoid::new(n, &g).expect("valid generators"))
}

/// Every element of `G/Z^n`, as coordinates in `[0,1)^n`.
pub fn all_classes(g: &AdmissibleGroup) -> BTreeSet<Vec<Rational>> {
    let cp = g.character_presentation();
    cp.group.elements().iter().map(|t| cp.representative(t)).collect()
}

pub fn fractional(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(frac).collect()
}
