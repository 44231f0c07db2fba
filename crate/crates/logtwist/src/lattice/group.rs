//! Finite abelian groups in invariant-factor form, and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use super::matrix::IntMatrix;
use super::normal_form::cokernel;
use super::LatticeError;

/// `Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ... | d_k`, each `d_i ≥ 2`.
/// Elements are coordinate vectors with `0 ≤ x_i < d_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self, LatticeError> {
        if let Some(&d) = invariant_factors.iter().find(|&&d| d < 2) {
            return Err(LatticeError::FactorTooSmall(d));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(LatticeError::NotDivisibilityChain(invariant_factors));
        }
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup::default()
    }

    /// `Z/n`; trivial for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        Self::from_cyclic_orders(&[n])
    }

    /// Canonical form of `⊕ Z/n_i` for arbitrary positive orders.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|&n| BigInt::from(n)).collect();
        cokernel(&IntMatrix::diagonal(&diag)).torsion
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Number of cyclic factors.
    pub fn ngens(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Largest element order; 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.ngens()]
    }

    pub fn generator(&self, j: usize) -> Vec<u64> {
        let mut g = self.zero();
        g[j] = 1;
        g
    }

    pub fn is_element(&self, a: &[u64]) -> bool {
        a.len() == self.ngens() && a.iter().zip(&self.invariant_factors).all(|(x, d)| x < d)
    }

    /// Reduces arbitrary integer coordinates into canonical range.
    pub fn reduce(&self, a: &[BigInt]) -> Vec<u64> {
        a.iter()
            .zip(&self.invariant_factors)
            .map(|(x, &d)| {
                let r = x.mod_floor(&BigInt::from(d));
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| (d - x) % d)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| ((*x as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.invariant_factors)
            .fold(1, |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// Position of `a` in the mixed-radix enumeration (last coordinate fastest).
    pub fn index_of(&self, a: &[u64]) -> usize {
        a.iter()
            .zip(&self.invariant_factors)
            .fold(0usize, |acc, (x, d)| acc * *d as usize + *x as usize)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut out = self.zero();
        for (k, d) in self.invariant_factors.iter().enumerate().rev() {
            out[k] = (index % *d as usize) as u64;
            index /= *d as usize;
        }
        out
    }

    /// All elements in enumeration order, starting with zero.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order() as usize).map(|i| self.element(i)).collect()
    }

    /// `self^r` in canonical form.
    pub fn power(&self, r: usize) -> Self {
        let orders: Vec<u64> = (0..r).flat_map(|_| self.invariant_factors.iter().copied()).collect();
        Self::from_cyclic_orders(&orders)
    }

    /// Canonical form of `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.invariant_factors.clone();
        orders.extend_from_slice(&other.invariant_factors);
        Self::from_cyclic_orders(&orders)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `Ext^1(a, Z) ≅ a`.
pub fn ext1_to_z(a: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    a.clone()
}

/// `Ext^1(a, Z^r) ≅ a^r`.
pub fn ext1(a: &FiniteAbelianGroup, r: usize) -> FiniteAbelianGroup {
    a.power(r)
}

/// Homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<Vec<u64>>,
}

impl GroupHom {
    /// Checks that each image is a target element killed by its generator's order.
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Vec<Vec<u64>>,
    ) -> Result<Self, LatticeError> {
        if images.len() != source.ngens() {
            return Err(LatticeError::LengthMismatch {
                expected: source.ngens(),
                found: images.len(),
            });
        }
        for (j, img) in images.iter().enumerate() {
            if !target.is_element(img) {
                return Err(LatticeError::NotAnElement(img.clone()));
            }
            let d = source.invariant_factors()[j];
            if target.scale(d, img) != target.zero() {
                return Err(LatticeError::ImageOrder { generator: j });
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.target.zero();
        for (x, img) in a.iter().zip(&self.images) {
            out = self.target.add(&out, &self.target.scale(*x, img));
        }
        out
    }

    /// Brute force over the source; desk-scale groups only.
    pub fn is_injective(&self) -> bool {
        let zero = self.target.zero();
        self.source.elements().iter().skip(1).all(|a| self.apply(a) != zero)
    }
}
