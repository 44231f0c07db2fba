use super::*;
use crate::lattice::rat;

fn z(n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n)
}

fn mu4() -> LocalMonoid {
    LocalMonoid::from_upper_triangle(z(4), &[0, 1, 1, 2, 1, 0]).unwrap()
}

#[test]
fn validate_examples() {
    assert_eq!(LocalMonoid::trivial().validate(), Ok(()));
    let d = LocalMonoid::from_upper_triangle(z(2), &[3]).unwrap();
    assert_eq!(d.validate(), Ok(()));
    let bad = LocalMonoid::from_upper_triangle(z(2), &[0]).unwrap();
    assert_eq!(bad.validate(), Err(CocycleViolation::Sharpness { theta: vec![1] }));
    assert_eq!(mu4().validate(), Ok(()));
    let asym = LocalMonoid::from_table(z(2), vec![0, 0, 1, 1]).unwrap();
    assert!(matches!(asym.validate(), Err(CocycleViolation::Identity { .. })));
    let non_assoc = LocalMonoid::from_upper_triangle(z(3), &[1, 0, 1]).unwrap();
    assert!(matches!(
        non_assoc.validate(),
        Err(CocycleViolation::Associativity { .. })
    ));
}

#[test]
fn add_examples() {
    let d = LocalMonoid::from_upper_triangle(z(2), &[3]).unwrap();
    assert_eq!(d.add(&(2, vec![0]), &(5, vec![0])), (7, vec![0]));
    assert_eq!(d.add(&(0, vec![1]), &(0, vec![1])), (3, vec![0]));
    // Z/3 with c11 = a, c12 = a + b, c22 = b: 3 z_1 = (c11 + c12, 0).
    let (a, b) = (2, 1);
    let d = LocalMonoid::from_upper_triangle(z(3), &[a, a + b, b]).unwrap();
    let z1 = (0, vec![1]);
    let two = d.add(&z1, &z1);
    assert_eq!(two, (a, vec![2]));
    assert_eq!(d.add(&two, &z1), (a + a + b, vec![0]));
    let z2 = (0, vec![2]);
    assert_eq!(d.add(&d.add(&z2, &z2), &z2), (b + a + b, vec![0]));
}

#[test]
fn fibers_are_translates_of_n() {
    let d = mu4();
    for t in d.group().elements() {
        for a in 0..5u64 {
            let x = d.add(&(a, d.group().zero()), &(0, t.clone()));
            assert_eq!(x, (a, t.clone()));
        }
    }
}

#[test]
fn pushout_examples() {
    for c in 1..5usize {
        let g = vec![rat(1, 2); c];
        let m = AdmissibleMonoid::new(c, &[g]).unwrap();
        let d = pushout_to_local(&m);
        assert_eq!(d.group(), &z(2));
        assert_eq!(d.upper_triangle(), vec![c as u64]);
    }
    let m = AdmissibleMonoid::new(2, &[vec![rat(1, 3), rat(2, 3)], vec![rat(2, 3), rat(1, 3)]]).unwrap();
    let d = pushout_to_local(&m);
    assert_eq!(d.validate(), Ok(()));
    let expected = LocalMonoid::from_upper_triangle(z(3), &[1, 2, 1]).unwrap();
    assert!(d.is_isomorphic(&expected));
    assert_eq!(
        pushout_to_local(&AdmissibleMonoid::free_integral(3)),
        LocalMonoid::trivial()
    );
}

#[test]
fn character_tables() {
    let g = z(4);
    let zero = Character::new(&g, vec![0]).unwrap();
    assert!(carry_of_character(&zero, &g).upper_triangle().iter().all(|&c| c == 0));
    let chi = Character::new(&g, vec![1]).unwrap();
    // pairs (11,12,13,22,23,33)
    assert_eq!(carry_of_character(&chi, &g).upper_triangle(), vec![0, 0, 1, 1, 1, 1]);
    for m in 2..8u64 {
        let g = z(m);
        let one = Character::new(&g, vec![1]).unwrap();
        let d = pushout_to_local(&AdmissibleMonoid::free(&[m]));
        assert_eq!(d, carry_of_character(&one, &g));
    }
    assert!(Character::new(&g, vec![4]).is_err());
}

#[test]
fn decide_mu2_and_mu3() {
    for c in 1..6 {
        let d = LocalMonoid::from_upper_triangle(z(2), &[c]).unwrap();
        let dec = decide_pushout(&d).unwrap();
        let w = dec.witness().expect("Z/2 always representable");
        assert_eq!(w.monoid.rank(), c as usize);
        assert!(w.verify(&d));
        assert!(pushout_to_local(&w.monoid).is_isomorphic(&d));
    }
    for a in 0..4 {
        for b in 0..4 {
            if a + b == 0 {
                continue;
            }
            let d = LocalMonoid::from_upper_triangle(z(3), &[a, a + b, b]).unwrap();
            let dec = decide_pushout(&d).unwrap();
            let w = dec.witness().expect("Z/3 always representable");
            assert!(w.verify(&d));
        }
    }
}

#[test]
fn decide_mu4_is_negative() {
    let dec = decide_pushout(&mu4()).unwrap();
    assert!(!dec.raw_feasible);
    match dec.outcome {
        PushoutOutcome::NotRepresentable(cert) => {
            assert_eq!(cert.bounds.len(), 3);
            assert!(cert.pruned_total > 0);
            assert!(!cert.pruned.is_empty());
        }
        PushoutOutcome::Representable(_) => panic!("the μ4 cocycle is not a pushout"),
    }
}

#[test]
fn decide_rejects_invalid() {
    let bad = LocalMonoid::from_upper_triangle(z(2), &[0]).unwrap();
    assert!(matches!(decide_pushout(&bad), Err(LocalError::InvalidCocycle(_))));
}

#[test]
fn submonoid_builder() {
    let not = SubmonoidPresentation {
        torsion: z(2),
        generators: vec![(1, vec![0]), (1, vec![1])],
        unit: (2, vec![1]),
    };
    let out = local_monoid_from_submonoid(&not, 32).unwrap();
    assert!(out.local.is_isomorphic(&mu4()));

    for m in 1..7u64 {
        let p = SubmonoidPresentation {
            torsion: FiniteAbelianGroup::trivial(),
            generators: vec![(1, vec![])],
            unit: (m, vec![]),
        };
        let out = local_monoid_from_submonoid(&p, 64).unwrap();
        assert_eq!(out.local, pushout_to_local(&AdmissibleMonoid::free(&[m])));
    }

    let nz2 = SubmonoidPresentation {
        torsion: z(2),
        generators: vec![(1, vec![0]), (0, vec![1])],
        unit: (1, vec![0]),
    };
    assert!(matches!(
        local_monoid_from_submonoid(&nz2, 16),
        Err(LocalError::InvalidCocycle(CocycleViolation::Sharpness { .. }))
    ));
    let missing = SubmonoidPresentation {
        torsion: z(2),
        generators: vec![(1, vec![0])],
        unit: (1, vec![1]),
    };
    assert_eq!(
        local_monoid_from_submonoid(&missing, 16),
        Err(LocalError::UnitNotInMonoid)
    );
}
