mod common;

use common::monoid;
use logtwist::admissible::AdmissibleMonoid;
use logtwist::local::{decide_pushout, pushout_to_local, LocalMonoid};
use proptest::prelude::*;

fn small_monoid(max_order: u64) -> impl Strategy<Value = AdmissibleMonoid> {
    monoid(4, 6).prop_filter("character group too large", move |m| {
        m.stabilizer_group().order() <= max_order
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn pushout_cocycle_validates(m in small_monoid(12)) {
        let d = pushout_to_local(&m);
        prop_assert_eq!(d.validate(), Ok(()));
        prop_assert_eq!(d.group(), &m.stabilizer_group());
    }

    #[test]
    fn decide_round_trip(m in small_monoid(6)) {
        let d = pushout_to_local(&m);
        let decision = decide_pushout(&d).unwrap();
        prop_assert!(decision.raw_feasible);
        let w = decision.witness().expect("pushouts are representable");
        prop_assert!(w.verify(&d));
        prop_assert_eq!(w.local_monoid(d.group()), d.clone());
        prop_assert!(pushout_to_local(&w.monoid).is_isomorphic(&d));
    }

    #[test]
    fn fibers_are_copies_of_n(m in small_monoid(12), a in 0u64..50, b in 0u64..50) {
        let d = pushout_to_local(&m);
        let x = d.group().clone();
        for theta in x.elements() {
            prop_assert_eq!(d.add(&(a, x.zero()), &(b, theta.clone())), (a + b, theta.clone()));
            prop_assert_eq!(d.add(&(a, theta.clone()), &(b, x.zero())), (a + b, theta.clone()));
        }
    }

    #[test]
    fn isomorphism_is_reflexive(m in small_monoid(8)) {
        let d = pushout_to_local(&m);
        prop_assert!(d.is_isomorphic(&d));
        prop_assert!(d.is_isomorphic(&LocalMonoid::from_table(d.group().clone(), table_of(&d)).unwrap()));
    }
}

fn table_of(d: &LocalMonoid) -> Vec<u64> {
    let n = d.group().order() as usize;
    (0..n * n).map(|k| d.carry_at(k / n, k % n)).collect()
}
