use super::*;
use num_bigint::BigInt;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn snf_examples() {
    let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
    assert_eq!(s.diagonal(), ints(&[2, 2]));
    let s = smith_normal_form(&IntMatrix::identity(2));
    assert_eq!(s.d, IntMatrix::identity(2));
    let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
    let s = smith_normal_form(&m);
    assert_eq!(s.diagonal(), ints(&[2, 4]));
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    assert!(s.u.is_unimodular() && s.v.is_unimodular());
    assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(2));
    assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(2));
}

#[test]
fn cokernel_examples() {
    let c = cokernel(&IntMatrix::identity(2));
    assert!(c.torsion.is_trivial());
    assert_eq!(c.free_rank, 0);
    let c = cokernel(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
    assert_eq!(c.torsion.invariant_factors(), &[6]);
    assert_eq!(c.free_rank, 0);
    let c = cokernel(&IntMatrix::from_i64(&[&[2], &[0]]));
    assert_eq!(c.torsion.invariant_factors(), &[2]);
    assert_eq!(c.free_rank, 1);
}

#[test]
fn cokernel_classify_respects_relations() {
    let m = IntMatrix::from_i64(&[&[2, 1], &[0, 3], &[4, 4]]);
    let c = cokernel(&m);
    for j in 0..m.cols() {
        let (t, f) = c.classify(&m.column(j));
        assert_eq!(t, c.torsion.zero());
        assert!(f.iter().all(|x| *x == BigInt::from(0)));
    }
    for k in 0..c.torsion.ngens() {
        let (t, _) = c.classify(&c.torsion_generator(k));
        assert_eq!(t, c.torsion.generator(k));
    }
}

#[test]
fn ext_examples() {
    let z2 = FiniteAbelianGroup::cyclic(2);
    assert_eq!(ext1_to_z(&z2), z2);
    assert!(ext1_to_z(&FiniteAbelianGroup::trivial()).is_trivial());
    let a = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
    let e = ext1(&a, 2);
    assert_eq!(e.order(), 64);
    assert_eq!(e.invariant_factors(), &[2, 2, 4, 4]);
}

#[test]
fn congruence_examples() {
    let m = IntMatrix::from_i64(&[&[2]]);
    let x = solve_congruences(&m, &ints(&[2]), &ints(&[4])).unwrap();
    assert_eq!(x, ints(&[1]));
    assert!(solve_congruences(&m, &ints(&[1]), &ints(&[4])).is_none());
}

#[test]
fn group_construction_rejects_bad_chains() {
    assert!(FiniteAbelianGroup::new(vec![4, 2]).is_err());
    assert!(FiniteAbelianGroup::new(vec![1]).is_err());
    assert_eq!(
        FiniteAbelianGroup::from_cyclic_orders(&[2, 3]).invariant_factors(),
        &[6]
    );
    assert_eq!(
        FiniteAbelianGroup::from_cyclic_orders(&[4, 6]).invariant_factors(),
        &[2, 12]
    );
}

#[test]
fn element_enumeration_round_trips() {
    let g = FiniteAbelianGroup::new(vec![2, 6]).unwrap();
    let els = g.elements();
    assert_eq!(els.len(), 12);
    assert_eq!(els[0], g.zero());
    for (i, e) in els.iter().enumerate() {
        assert_eq!(g.index_of(e), i);
        assert_eq!(g.add(e, &g.neg(e)), g.zero());
    }
    assert_eq!(g.element_order(&[1, 2]), 6);
}

#[test]
fn hom_checks_orders() {
    let z2 = FiniteAbelianGroup::cyclic(2);
    let z4 = FiniteAbelianGroup::cyclic(4);
    assert!(GroupHom::new(z2.clone(), z4.clone(), vec![vec![2]]).is_ok());
    assert_eq!(
        GroupHom::new(z2.clone(), z4.clone(), vec![vec![1]]),
        Err(LatticeError::ImageOrder { generator: 0 })
    );
    let h = GroupHom::new(z4, z2, vec![vec![1]]).unwrap();
    assert_eq!(h.apply(&[3]), vec![1]);
    assert!(!h.is_injective());
}

#[test]
fn hnf_and_kernel() {
    let m = IntMatrix::from_i64(&[&[2, 4], &[1, 3], &[0, 0]]);
    let h = hermite_normal_form(&m);
    assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    let k = integer_kernel(&IntMatrix::from_i64(&[&[1, 2, 3]]));
    assert_eq!(k.rows(), 2);
    for r in k.to_rows() {
        assert_eq!(IntMatrix::from_i64(&[&[1, 2, 3]]).mul_vec(&r), ints(&[0]));
    }
    let a = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
    let b = IntMatrix::from_i64(&[&[1, 0], &[0, 3]]);
    assert_eq!(lattice_intersection(&a, &b), IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
}

#[test]
fn rational_text_form() {
    let q = parse_rational("6/4").unwrap();
    assert_eq!(format_rational(&q), "3/2");
    assert_eq!(format_rational(&parse_rational("-2").unwrap()), "-2");
    assert!(parse_rational("1/0").is_none());
    assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
    assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
}
