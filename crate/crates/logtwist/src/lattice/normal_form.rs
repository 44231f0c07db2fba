//! Smith and Hermite normal forms and the lattice computations built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::FiniteAbelianGroup;
use super::matrix::IntMatrix;

/// `u * m * v = d` with `d` diagonal and the diagonal a divisibility chain.
/// The inverses of `u` and `v` are carried along so that callers never invert.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form. Pivot: smallest nonzero absolute value, ties broken by
/// lowest row and then lowest column.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Row op on `a` is mirrored on `u`; its inverse acts on the columns of `u_inv`.
    let swap_rows = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    let add_row = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, t: usize, s: usize, k: &BigInt| {
        a.add_row_multiple(t, s, k);
        u.add_row_multiple(t, s, k);
        ui.add_col_multiple(s, t, &-k);
    };
    let swap_cols = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i: usize, j: usize| {
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        vi.swap_rows(i, j);
    };
    let add_col = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, t: usize, s: usize, k: &BigInt| {
        a.add_col_multiple(t, s, k);
        v.add_col_multiple(t, s, k);
        vi.add_row_multiple(s, t, &-k);
    };

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let ax = x.abs();
                    if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                        best = Some((i, j, ax));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return finish(a, u, v, u_inv, v_inv);
            };
            swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
            swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t) / a.get(t, t);
                add_row(&mut a, &mut u, &mut u_inv, i, t, &-q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / a.get(t, t);
                add_col(&mut a, &mut v, &mut v_inv, j, t, &-q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => add_row(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(a, u, v, u_inv, v_inv)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, u_inv: IntMatrix, v_inv: IntMatrix) -> SmithForm {
    SmithForm { u, d, v, u_inv, v_inv }
}

/// Row Hermite normal form of the lattice spanned by the rows of `m`:
/// echelon rows with positive pivots and entries above each pivot in `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pick = (r..rows)
                .filter(|&i| !a.get(i, col).is_zero())
                .min_by(|&x, &y| a.get(x, col).abs().cmp(&a.get(y, col).abs()).then(x.cmp(&y)));
            let Some(p) = pick else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = a.get(i, col).div_floor(a.get(r, col));
                a.add_row_multiple(i, r, &-q);
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r, col).is_zero() {
            continue;
        }
        if a.get(r, col).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, col).div_floor(a.get(r, col));
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    IntMatrix::from_rows(a.to_rows().into_iter().take(r).collect(), cols)
}

/// Z-basis (as HNF rows) of `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let k = s.rank();
    let basis: Vec<Vec<BigInt>> = (k..m.cols()).map(|j| s.v.column(j)).collect();
    hermite_normal_form(&IntMatrix::from_rows(basis, m.cols()))
}

/// Some integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "right-hand side length mismatch");
    let s = smith_normal_form(m);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, x) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !x.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = x.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Some `x` with `m x ≡ target` row-wise modulo `moduli`, entries reduced into `[0, lcm(moduli))`.
pub fn solve_congruences(m: &IntMatrix, target: &[BigInt], moduli: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), target.len(), "target length mismatch");
    assert_eq!(m.rows(), moduli.len(), "moduli length mismatch");
    assert!(moduli.iter().all(|q| q.is_positive()), "moduli must be positive");
    let aug = m.hstack(&IntMatrix::diagonal(moduli));
    let z = solve_integer(&aug, target)?;
    let l = moduli.iter().fold(BigInt::one(), |acc, q| acc.lcm(q));
    Some(z[..m.cols()].iter().map(|x| x.mod_floor(&l)).collect())
}

/// Intersection of the row lattices of `a` and `b` (same column count), as HNF rows.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.cols(), "ambient mismatch in intersection");
    // x a = y b  <=>  [x, y] [a; -b] = 0
    let mut neg_b = b.clone();
    for i in 0..neg_b.rows() {
        neg_b.negate_row(i);
    }
    let stacked = a.vstack(&neg_b);
    let ker = integer_kernel(&stacked.transpose());
    let coeffs: Vec<Vec<BigInt>> = ker.to_rows().into_iter().map(|r| r[..a.rows()].to_vec()).collect();
    let gens = IntMatrix::from_rows(coeffs, a.rows());
    hermite_normal_form(&gens.mul(a))
}

/// `coker(m : Z^cols -> Z^rows)` with coordinates for its elements.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
    smith: SmithForm,
    first_torsion: usize,
    rank: usize,
}

impl Cokernel {
    /// Coordinates of the class of `x ∈ Z^rows`: torsion part reduced per factor, then free part.
    pub fn classify(&self, x: &[BigInt]) -> (Vec<u64>, Vec<BigInt>) {
        let y = self.smith.u.mul_vec(x);
        let torsion = self
            .torsion
            .invariant_factors()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                y[self.first_torsion + k]
                    .mod_floor(&BigInt::from(d))
                    .to_u64()
                    .expect("residue fits in u64")
            })
            .collect();
        (torsion, y[self.rank..].to_vec())
    }

    /// A lift to `Z^rows` of the `k`-th torsion generator.
    pub fn torsion_generator(&self, k: usize) -> Vec<BigInt> {
        self.smith.u_inv.column(self.first_torsion + k)
    }

    /// A lift to `Z^rows` of the `k`-th free generator.
    pub fn free_generator(&self, k: usize) -> Vec<BigInt> {
        self.smith.u_inv.column(self.rank + k)
    }
}

/// Cokernel of `m : Z^cols -> Z^rows`.
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let smith = smith_normal_form(m);
    let diag = smith.diagonal();
    let rank = smith.rank();
    let first_torsion = diag.iter().take(rank).take_while(|d| d.is_one()).count();
    let factors: Vec<u64> = diag[first_torsion..rank]
        .iter()
        .map(|d| d.to_u64().expect("invariant factor fits in u64"))
        .collect();
    Cokernel {
        torsion: FiniteAbelianGroup::new(factors).expect("smith diagonal is a divisibility chain"),
        free_rank: m.rows() - rank,
        smith,
        first_torsion,
        rank,
    }
}
