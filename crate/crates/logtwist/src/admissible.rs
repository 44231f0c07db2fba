//! Admissible groups `Z^n ⊆ G ⊆ Q^n` and admissible monoids `N = G ∩ Q^n_{≥0}`.
//!
//! A group is stored as `(L, B)` where `L` is the exponent of `G/Z^n` and `B`
//! is the row Hermite normal form of the full-rank lattice `L·G ⊆ Z^n`. Both
//! are functions of the subgroup alone, so derived equality is set equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{
    cokernel, common_denominator, format_rational, frac, hermite_normal_form, is_nonnegative, scale_to_integers,
    Cokernel, FiniteAbelianGroup, IntMatrix, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmissibleError {
    #[error("vector has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for ambient rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("index {0} repeated")]
    DuplicateIndex(usize),
}

/// Finitely generated subgroup of `Q^n` containing `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleGroup {
    rank: usize,
    denominator: BigInt,
    lattice: IntMatrix,
}

impl AdmissibleGroup {
    /// `Z^n` together with the given rational generators.
    pub fn new(rank: usize, generators: &[Vec<Rational>]) -> Result<Self, AdmissibleError> {
        for g in generators {
            check_rank(rank, g)?;
        }
        let l = common_denominator(generators.iter().flatten());
        let mut rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| scale_to_integers(g, &l).expect("common denominator clears fractions"))
            .collect();
        for i in 0..rank {
            let mut e = vec![BigInt::zero(); rank];
            e[i] = l.clone();
            rows.push(e);
        }
        let lattice = hermite_normal_form(&IntMatrix::from_rows(rows, rank));
        debug_assert_eq!(lattice.rows(), rank);
        Ok(AdmissibleGroup {
            rank,
            denominator: l,
            lattice,
        })
    }

    /// `Z^n`.
    pub fn integral(rank: usize) -> Self {
        Self::new(rank, &[]).expect("no generators")
    }

    /// `⊕ (1/m_i) Z`.
    pub fn free(orders: &[u64]) -> Self {
        let n = orders.len();
        let gens: Vec<Vec<Rational>> = orders
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::new(BigInt::one(), BigInt::from(m));
                v
            })
            .collect();
        Self::new(n, &gens).expect("ranks agree")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponent `L` of `G/Z^n`.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// HNF basis of `L·G`, upper triangular and `n × n`.
    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    /// Hermite-reduced representatives of the nonzero HNF rows of `G/Z^n`, coordinates in `[0,1)`.
    pub fn representatives(&self) -> Vec<Vec<Rational>> {
        let l = Rational::from_integer(self.denominator.clone());
        self.lattice
            .to_rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| frac(&(Rational::from_integer(x) / &l)))
                    .collect::<Vec<_>>()
            })
            .filter(|v: &Vec<Rational>| v.iter().any(|q| !q.is_zero()))
            .collect()
    }

    /// Coordinates of `w` in the basis `B`, if `w ∈ L·G`.
    fn lattice_coordinates(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut w = w.to_vec();
        let mut y = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let p = self.lattice.get(i, i);
            let (q, r) = w[i].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            for j in i..self.rank {
                let s = &q * self.lattice.get(i, j);
                w[j] -= s;
            }
            y.push(q);
        }
        Some(y)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, AdmissibleError> {
        check_rank(self.rank, v)?;
        Ok(match scale_to_integers(v, &self.denominator) {
            Some(w) => self.lattice_coordinates(&w).is_some(),
            None => false,
        })
    }

    pub fn is_subgroup_of(&self, other: &AdmissibleGroup) -> Result<bool, AdmissibleError> {
        if self.rank != other.rank {
            return Err(AdmissibleError::RankMismatch {
                expected: other.rank,
                found: self.rank,
            });
        }
        for r in self.representatives() {
            if !other.contains(&r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image under the projection `Q^n → Q^I`. `indices` are 0-based coordinates, kept in ascending order.
    pub fn quotient(&self, indices: &[usize]) -> Result<AdmissibleGroup, AdmissibleError> {
        let idx = normalize_indices(self.rank, indices)?;
        let gens: Vec<Vec<Rational>> = self
            .representatives()
            .into_iter()
            .map(|r| idx.iter().map(|&i| r[i].clone()).collect())
            .collect();
        AdmissibleGroup::new(idx.len(), &gens)
    }

    /// Relation matrix of `Z^I ⊕_{Z^n} G` on generators `Z^I` followed by the basis of `L·G`.
    fn pushout_relations(&self, idx: &[usize]) -> IntMatrix {
        let k = idx.len();
        let n = self.rank;
        let mut rel = IntMatrix::zeros(k + n, n);
        for i in 0..n {
            if let Some(pos) = idx.iter().position(|&x| x == i) {
                rel.set(pos, i, BigInt::one());
            }
            let mut w = vec![BigInt::zero(); n];
            w[i] = self.denominator.clone();
            let y = self.lattice_coordinates(&w).expect("L·e_i lies in L·G");
            for (j, yj) in y.into_iter().enumerate() {
                rel.set(k + j, i, -yj);
            }
        }
        rel
    }

    /// The abelian-group pushout `Z^I ⊕_{Z^n} G`.
    pub fn pushout_abelian(&self, indices: &[usize]) -> Result<AbelianPushout, AdmissibleError> {
        let idx = normalize_indices(self.rank, indices)?;
        let coker = cokernel(&self.pushout_relations(&idx));
        Ok(AbelianPushout {
            torsion: coker.torsion.clone(),
            free_rank: coker.free_rank,
            indices: idx,
            source: self.clone(),
            coker,
        })
    }

    /// `G/Z^n` with an explicit isomorphism to its invariant-factor form.
    pub fn character_presentation(&self) -> CharacterPresentation {
        let n = self.rank;
        let mut k = IntMatrix::zeros(n, n);
        for i in 0..n {
            let mut w = vec![BigInt::zero(); n];
            w[i] = self.denominator.clone();
            let y = self.lattice_coordinates(&w).expect("L·e_i lies in L·G");
            for (j, yj) in y.into_iter().enumerate() {
                k.set(j, i, yj);
            }
        }
        let coker = cokernel(&k);
        debug_assert_eq!(coker.free_rank, 0);
        let group = coker.torsion.clone();
        let generators = (0..group.ngens())
            .map(|j| self.from_lattice_coordinates(&coker.torsion_generator(j)))
            .collect();
        CharacterPresentation {
            group,
            generators,
            ambient: self.clone(),
            coker,
        }
    }

    fn from_lattice_coordinates(&self, y: &[BigInt]) -> Vec<Rational> {
        let w = self.lattice.vec_mul(y);
        let l = Rational::from_integer(self.denominator.clone());
        w.into_iter().map(|x| frac(&(Rational::from_integer(x) / &l))).collect()
    }

    /// `G/Z^n` in canonical form.
    pub fn stabilizer_group(&self) -> FiniteAbelianGroup {
        self.character_presentation().group
    }
}

/// `Z^I ⊕_{Z^n} G` as torsion plus free rank.
#[derive(Clone, Debug)]
pub struct AbelianPushout {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
    indices: Vec<usize>,
    source: AdmissibleGroup,
    coker: Cokernel,
}

impl AbelianPushout {
    /// Images in `Q^I` of the free generators under `(z, g) ↦ z + π(g)`.
    pub fn free_generator_images(&self) -> Vec<Vec<Rational>> {
        let k = self.indices.len();
        let l = Rational::from_integer(self.source.denominator.clone());
        (0..self.free_rank)
            .map(|j| {
                let x = self.coker.free_generator(j);
                let g = self.source.lattice.vec_mul(&x[k..]);
                self.indices
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| Rational::from_integer(x[pos].clone()) + Rational::from_integer(g[i].clone()) / &l)
                    .collect()
            })
            .collect()
    }
}

/// Invariant-factor form of `G/Z^n` and representatives of its generators in `[0,1)^n`.
#[derive(Clone, Debug)]
pub struct CharacterPresentation {
    pub group: FiniteAbelianGroup,
    pub generators: Vec<Vec<Rational>>,
    ambient: AdmissibleGroup,
    coker: Cokernel,
}

impl CharacterPresentation {
    /// Class in `group` of an element of `G`; `None` if `v ∉ G`.
    pub fn classify(&self, v: &[Rational]) -> Option<Vec<u64>> {
        let w = scale_to_integers(v, &self.ambient.denominator)?;
        let y = self.ambient.lattice_coordinates(&w)?;
        Some(self.coker.classify(&y).0)
    }

    /// Minimal lift of `θ`: the representative in `[0,1)^n`.
    pub fn representative(&self, theta: &[u64]) -> Vec<Rational> {
        let n = self.ambient.rank;
        let mut out = vec![Rational::zero(); n];
        for (x, g) in theta.iter().zip(&self.generators) {
            for i in 0..n {
                out[i] += Rational::from_integer(BigInt::from(*x)) * &g[i];
            }
        }
        out.iter().map(frac).collect()
    }
}

/// Fine, sharp, saturated submonoid `G ∩ Q^n_{≥0}` of `Q^n_{≥0}` containing `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleMonoid {
    group: AdmissibleGroup,
}

impl AdmissibleMonoid {
    /// Saturation of `N^n` together with the given generators.
    pub fn new(rank: usize, generators: &[Vec<Rational>]) -> Result<Self, AdmissibleError> {
        Ok(Self::from_group(AdmissibleGroup::new(rank, generators)?))
    }

    pub fn from_group(group: AdmissibleGroup) -> Self {
        AdmissibleMonoid { group }
    }

    /// `N^n`.
    pub fn free_integral(rank: usize) -> Self {
        Self::from_group(AdmissibleGroup::integral(rank))
    }

    /// `⊕ (1/m_i) N`.
    pub fn free(orders: &[u64]) -> Self {
        Self::from_group(AdmissibleGroup::free(orders))
    }

    pub fn group(&self) -> &AdmissibleGroup {
        &self.group
    }

    pub fn into_group(self) -> AdmissibleGroup {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn generators(&self) -> Vec<Vec<Rational>> {
        self.group.representatives()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, AdmissibleError> {
        Ok(self.group.contains(v)? && is_nonnegative(v))
    }

    pub fn is_contained(&self, other: &AdmissibleMonoid) -> Result<bool, AdmissibleError> {
        self.group.is_subgroup_of(&other.group)
    }

    pub fn equal(&self, other: &AdmissibleMonoid) -> Result<bool, AdmissibleError> {
        if self.rank() != other.rank() {
            return Err(AdmissibleError::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(self == other)
    }

    pub fn quotient(&self, indices: &[usize]) -> Result<AdmissibleMonoid, AdmissibleError> {
        Ok(Self::from_group(self.group.quotient(indices)?))
    }

    /// Orders `m_i` with `quotient(m, {i}) = (1/m_i)N`, and the envelope `⊕ (1/m_i)N`.
    pub fn free_envelope(&self) -> (Vec<u64>, AdmissibleMonoid) {
        let orders: Vec<u64> = (0..self.rank())
            .map(|i| {
                self.group
                    .quotient(&[i])
                    .expect("index in range")
                    .denominator
                    .to_u64()
                    .expect("order fits in u64")
            })
            .collect();
        let env = AdmissibleMonoid::free(&orders);
        (orders, env)
    }

    pub fn is_free(&self) -> bool {
        let (_, env) = self.free_envelope();
        env == *self
    }

    pub fn stabilizer_group(&self) -> FiniteAbelianGroup {
        self.group.stabilizer_group()
    }
}

impl fmt::Display for AdmissibleMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (orders, env) = self.free_envelope();
        if self.rank() == 0 {
            return write!(f, "0");
        }
        if env == *self {
            let parts: Vec<String> = orders
                .iter()
                .map(|&m| if m == 1 { "N".to_string() } else { format!("(1/{m})N") })
                .collect();
            return write!(f, "{}", parts.join(" ⊕ "));
        }
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|g| {
                let c: Vec<String> = g.iter().map(format_rational).collect();
                format!("({})", c.join(", "))
            })
            .collect();
        write!(f, "⟨N^{}, {}⟩", self.rank(), gens.join(", "))
    }
}

/// Sorted, deduplicated-checked, in-range index list.
pub fn normalize_indices(rank: usize, indices: &[usize]) -> Result<Vec<usize>, AdmissibleError> {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return Err(AdmissibleError::DuplicateIndex(w[0]));
        }
    }
    if let Some(&i) = idx.iter().find(|&&i| i >= rank) {
        return Err(AdmissibleError::IndexOutOfRange { index: i, rank });
    }
    Ok(idx)
}

fn check_rank(rank: usize, v: &[Rational]) -> Result<(), AdmissibleError> {
    if v.len() != rank {
        return Err(AdmissibleError::RankMismatch {
            expected: rank,
            found: v.len(),
        });
    }
    Ok(())
}
