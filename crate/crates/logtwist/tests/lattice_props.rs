use logtwist::lattice::{cokernel, ext1_to_z, smith_normal_form, solve_congruences, FiniteAbelianGroup, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |xs| {
            let rows = xs
                .chunks(c)
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            IntMatrix::from_rows(rows, c)
        })
    })
}

/// Random elementary operations `(kind, a, b, k)` applied to rows or columns.
fn scramble(m: &IntMatrix, ops: &[(u8, usize, usize, i64)]) -> IntMatrix {
    let mut m = m.clone();
    for &(kind, a, b, k) in ops {
        let (r, c) = (m.rows(), m.cols());
        match kind % 4 {
            0 if a % r != b % r => m.add_row_multiple(a % r, b % r, &BigInt::from(k)),
            1 if a % c != b % c => m.add_col_multiple(a % c, b % c, &BigInt::from(k)),
            2 => m.swap_rows(a % r, b % r),
            3 => m.swap_cols(a % c, b % c),
            _ => {}
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_postcondition(m in matrix(4, 9)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_moves(
        m in matrix(4, 6),
        ops in prop::collection::vec((0u8..4, 0usize..4, 0usize..4, -3i64..=3), 0..12),
    ) {
        let a = cokernel(&m);
        let b = cokernel(&scramble(&m, &ops));
        prop_assert_eq!(a.torsion, b.torsion);
        prop_assert_eq!(a.free_rank, b.free_rank);
    }

    #[test]
    fn cokernel_classify_kills_relations(m in matrix(4, 6), x in prop::collection::vec(-20i64..20, 4)) {
        let c = cokernel(&m);
        let x: Vec<BigInt> = x[..m.rows()].iter().map(|&v| BigInt::from(v)).collect();
        let base = c.classify(&x);
        for j in 0..m.cols() {
            let shifted: Vec<BigInt> = x.iter().zip(m.column(j)).map(|(a, b)| a + b).collect();
            prop_assert_eq!(c.classify(&shifted), base.clone());
        }
    }

    #[test]
    fn ext1_to_z_has_same_order(factors in prop::collection::vec(1u64..8, 0..4)) {
        let a = FiniteAbelianGroup::from_cyclic_orders(&factors);
        prop_assert_eq!(ext1_to_z(&a).order(), a.order());
    }

    #[test]
    fn congruences_agree_with_exhaustive_search(
        rows in 1usize..3,
        cols in 1usize..3,
        entries in prop::collection::vec(-5i64..=5, 4),
        target in prop::collection::vec(-5i64..=5, 2),
        moduli in prop::collection::vec(1i64..=12, 2),
    ) {
        let m = IntMatrix::from_rows(
            (0..rows).map(|i| (0..cols).map(|j| BigInt::from(entries[i * 2 + j])).collect()).collect(),
            cols,
        );
        let t: Vec<BigInt> = target[..rows].iter().map(|&x| BigInt::from(x)).collect();
        let q: Vec<BigInt> = moduli[..rows].iter().map(|&x| BigInt::from(x)).collect();
        let l = moduli[..rows].iter().fold(1i64, |acc, &x| acc.lcm(&x));
        let satisfies = |x: &[BigInt]| {
            (0..rows).all(|i| {
                let s: BigInt = (0..cols).map(|j| m.get(i, j) * &x[j]).sum();
                (s - &t[i]).is_multiple_of(&q[i])
            })
        };
        let mut exists = false;
        let total = (l as u64).pow(cols as u32);
        for code in 0..total {
            let x: Vec<BigInt> = (0..cols).map(|j| BigInt::from((code / (l as u64).pow(j as u32)) % l as u64)).collect();
            if satisfies(&x) {
                exists = true;
                break;
            }
        }
        match solve_congruences(&m, &t, &q) {
            Some(x) => {
                prop_assert!(satisfies(&x));
                prop_assert!(x.iter().all(|v| v.to_i64().is_some_and(|v| (0..l).contains(&v))));
            }
            None => prop_assert!(!exists),
        }
    }
}
