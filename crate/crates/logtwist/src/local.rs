//! Local monoids `D ⊇ N` presented by a finite group `X = D^gp/Z` and a carry cocycle.
//!
//! Elements are pairs `(a, θ)` with `a ∈ N`, `θ ∈ X`, and
//! `(a, θ) + (a', θ') = (a + a' + c(θ, θ'), θ + θ')`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::admissible::AdmissibleMonoid;
use crate::lattice::{cokernel, floor, integer_kernel, FiniteAbelianGroup, IntMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("carry table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(CocycleViolation),
    #[error("character value {value:?} is not an element of Z/{order}")]
    CharacterValue { value: u64, order: u64 },
    #[error("character has {found} values, expected {expected}")]
    CharacterLength { expected: usize, found: usize },
    #[error("designated element is not in the submonoid")]
    UnitNotInMonoid,
    #[error("quotient by the designated element is infinite")]
    InfiniteQuotient,
    #[error("no element over class {class:?} with first coordinate at most {bound}")]
    BoundExhausted { class: Vec<u64>, bound: u64 },
    #[error("fiber over class {class:?} is not a single N-orbit: {detail}")]
    NotLocal { class: Vec<u64>, detail: String },
    #[error("generator {0} is malformed")]
    MalformedGenerator(usize),
    #[error("groups differ: {left} vs {right}")]
    GroupMismatch {
        left: FiniteAbelianGroup,
        right: FiniteAbelianGroup,
    },
}

/// First failing cocycle axiom. Elements are coordinate vectors in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleViolation {
    #[error("c(0, {theta:?}) = {value} is not zero")]
    Identity { theta: Vec<u64>, value: u64 },
    #[error("c({a:?}, {b:?}) differs from c({b:?}, {a:?})")]
    Symmetry { a: Vec<u64>, b: Vec<u64> },
    #[error("associativity fails at ({a:?}, {b:?}, {c:?})")]
    Associativity { a: Vec<u64>, b: Vec<u64>, c: Vec<u64> },
    #[error("sharpness fails: c({theta:?}, -{theta:?}) = 0")]
    Sharpness { theta: Vec<u64> },
}

/// `(X, c)` with `c` stored as a full `|X| × |X|` table in element enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalMonoid {
    group: FiniteAbelianGroup,
    table: Vec<u64>,
}

impl LocalMonoid {
    /// `D = N`.
    pub fn trivial() -> Self {
        LocalMonoid {
            group: FiniteAbelianGroup::trivial(),
            table: vec![0],
        }
    }

    /// Takes a full table; axioms are checked by [`validate`](Self::validate), not here.
    pub fn from_table(group: FiniteAbelianGroup, table: Vec<u64>) -> Result<Self, LocalError> {
        let n = group.order() as usize;
        if table.len() != n * n {
            return Err(LocalError::TableSize {
                expected: n * n,
                found: table.len(),
            });
        }
        Ok(LocalMonoid { group, table })
    }

    /// Upper triangle over the nonzero elements in enumeration order:
    /// `(c11, c12, ..., c1k, c22, ..., ckk)`.
    pub fn from_upper_triangle(group: FiniteAbelianGroup, values: &[u64]) -> Result<Self, LocalError> {
        let n = group.order() as usize;
        let k = n - 1;
        if values.len() != k * (k + 1) / 2 {
            return Err(LocalError::TableSize {
                expected: k * (k + 1) / 2,
                found: values.len(),
            });
        }
        let mut table = vec![0; n * n];
        let mut it = values.iter();
        for i in 1..n {
            for j in i..n {
                let c = *it.next().expect("length checked");
                table[i * n + j] = c;
                table[j * n + i] = c;
            }
        }
        Ok(LocalMonoid { group, table })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn upper_triangle(&self) -> Vec<u64> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 1..n {
            for j in i..n {
                out.push(self.table[i * n + j]);
            }
        }
        out
    }

    fn size(&self) -> usize {
        self.group.order() as usize
    }

    /// Carry by element indices.
    pub fn carry_at(&self, i: usize, j: usize) -> u64 {
        self.table[i * self.size() + j]
    }

    pub fn carry(&self, a: &[u64], b: &[u64]) -> u64 {
        self.carry_at(self.group.index_of(a), self.group.index_of(b))
    }

    /// Checks identity, symmetry, associativity and sharpness, in that order.
    pub fn validate(&self) -> Result<(), CocycleViolation> {
        let n = self.size();
        let g = &self.group;
        for t in 0..n {
            if self.carry_at(0, t) != 0 || self.carry_at(t, 0) != 0 {
                return Err(CocycleViolation::Identity {
                    theta: g.element(t),
                    value: self.carry_at(0, t).max(self.carry_at(t, 0)),
                });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.carry_at(a, b) != self.carry_at(b, a) {
                    return Err(CocycleViolation::Symmetry {
                        a: g.element(a),
                        b: g.element(b),
                    });
                }
            }
        }
        let els = g.elements();
        let sum: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| g.index_of(&g.add(&els[a], &els[b]))).collect())
            .collect();
        for a in 1..n {
            for b in 1..n {
                for c in 1..n {
                    let lhs = self.carry_at(a, b) + self.carry_at(sum[a][b], c);
                    let rhs = self.carry_at(a, sum[b][c]) + self.carry_at(b, c);
                    if lhs != rhs {
                        return Err(CocycleViolation::Associativity {
                            a: els[a].clone(),
                            b: els[b].clone(),
                            c: els[c].clone(),
                        });
                    }
                }
            }
        }
        for t in 1..n {
            let neg = g.index_of(&g.neg(&els[t]));
            if self.carry_at(t, neg) == 0 {
                return Err(CocycleViolation::Sharpness { theta: els[t].clone() });
            }
        }
        Ok(())
    }

    /// Monoid addition.
    pub fn add(&self, x: &(u64, Vec<u64>), y: &(u64, Vec<u64>)) -> (u64, Vec<u64>) {
        (x.0 + y.0 + self.carry(&x.1, &y.1), self.group.add(&x.1, &y.1))
    }

    /// An automorphism-level identification `X → X'` carrying `c` to `c'`, by brute force
    /// over generator images. Returns the images of the generators of `X`.
    pub fn isomorphism_to(&self, other: &LocalMonoid) -> Option<Vec<Vec<u64>>> {
        if self.group != other.group {
            return None;
        }
        let g = &self.group;
        let els = g.elements();
        let candidates: Vec<Vec<&Vec<u64>>> = g
            .invariant_factors()
            .iter()
            .map(|&d| els.iter().filter(|e| g.element_order(e) == d).collect())
            .collect();
        let k = g.ngens();
        let mut choice = vec![0usize; k];
        loop {
            if candidates.iter().any(|c| c.is_empty()) {
                return None;
            }
            let images: Vec<Vec<u64>> = (0..k).map(|j| candidates[j][choice[j]].clone()).collect();
            let map: Vec<usize> = els
                .iter()
                .map(|e| {
                    let mut out = g.zero();
                    for (x, img) in e.iter().zip(&images) {
                        out = g.add(&out, &g.scale(*x, img));
                    }
                    g.index_of(&out)
                })
                .collect();
            let mut seen = vec![false; els.len()];
            let bijective = map.iter().all(|&i| !std::mem::replace(&mut seen[i], true));
            if bijective
                && (0..els.len()).all(|a| (0..els.len()).all(|b| self.carry_at(a, b) == other.carry_at(map[a], map[b])))
            {
                return Some(images);
            }
            let mut j = 0;
            loop {
                if j == k {
                    return None;
                }
                choice[j] += 1;
                if choice[j] < candidates[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }

    pub fn is_isomorphic(&self, other: &LocalMonoid) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

/// Element of `Hom(X, Q/Z)`: generator `g_j` maps to `values[j] / d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    values: Vec<u64>,
}

impl Character {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<u64>) -> Result<Self, LocalError> {
        if values.len() != group.ngens() {
            return Err(LocalError::CharacterLength {
                expected: group.ngens(),
                found: values.len(),
            });
        }
        for (&v, &d) in values.iter().zip(group.invariant_factors()) {
            if v >= d {
                return Err(LocalError::CharacterValue { value: v, order: d });
            }
        }
        Ok(Character { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `χ(θ)` as a numerator over the exponent `e` of `X`, in `[0, e)`.
    pub fn units(&self, group: &FiniteAbelianGroup, theta: &[u64]) -> u64 {
        let e = group.exponent();
        let mut acc: u128 = 0;
        for ((t, v), d) in theta.iter().zip(&self.values).zip(group.invariant_factors()) {
            acc += *t as u128 * *v as u128 * (e / d) as u128;
        }
        (acc % e as u128) as u64
    }

    /// `χ(θ)` as a rational in `[0, 1)`.
    pub fn value(&self, group: &FiniteAbelianGroup, theta: &[u64]) -> Rational {
        Rational::new(BigInt::from(self.units(group, theta)), BigInt::from(group.exponent()))
    }

    /// Images of the generators as rationals in `[0, 1)`.
    pub fn generator_values(&self, group: &FiniteAbelianGroup) -> Vec<Rational> {
        self.values
            .iter()
            .zip(group.invariant_factors())
            .map(|(&v, &d)| Rational::new(BigInt::from(v), BigInt::from(d)))
            .collect()
    }
}

/// All characters of `X` in lexicographic order of generator images, zero first.
pub fn characters(group: &FiniteAbelianGroup) -> Vec<Character> {
    group
        .elements()
        .into_iter()
        .map(|values| Character { values })
        .collect()
}

/// `t(θ, θ') = [rep χ(θ) + rep χ(θ') ≥ 1]`, as a local-monoid table (not sharp in general).
pub fn carry_of_character(chi: &Character, group: &FiniteAbelianGroup) -> LocalMonoid {
    let e = group.exponent();
    let els = group.elements();
    let vals: Vec<u64> = els.iter().map(|t| chi.units(group, t)).collect();
    let n = els.len();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = u64::from(vals[a] + vals[b] >= e);
        }
    }
    LocalMonoid {
        group: group.clone(),
        table,
    }
}

/// `N ⊕_{N^n} N` along coordinate summation, with `X` in the canonical presentation of `G/Z^n`.
pub fn pushout_to_local(m: &AdmissibleMonoid) -> LocalMonoid {
    let cp = m.group().character_presentation();
    let reps: Vec<Vec<Rational>> = cp.group.elements().iter().map(|t| cp.representative(t)).collect();
    carry_from_representatives(&cp.group, &reps)
}

/// `c(θ, θ') = Σ_i ⌊g_θ,i + g_θ',i⌋` for representatives in `[0,1)^n` indexed by element.
fn carry_from_representatives(group: &FiniteAbelianGroup, reps: &[Vec<Rational>]) -> LocalMonoid {
    let n = reps.len();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let c: BigInt = reps[a].iter().zip(&reps[b]).map(|(x, y)| floor(&(x + y))).sum();
            let c = u64::try_from(c).expect("carry is a small nonnegative integer");
            table[a * n + b] = c;
            table[b * n + a] = c;
        }
    }
    LocalMonoid {
        group: group.clone(),
        table,
    }
}

/// Solution of the pushout decision: columns carry characters of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutWitness {
    /// Multiplicity of each nonzero character used, in search order.
    pub multiplicities: Vec<(Character, u64)>,
    /// The character realized by each coordinate of the witness monoid.
    pub columns: Vec<Character>,
    /// Generated by `N^n` and, per generator `g_j` of `X`, the vector `(χ_i(g_j))_i`.
    pub monoid: AdmissibleMonoid,
}

impl PushoutWitness {
    /// Representative in `[0,1)^n` of `θ` under the witness identification.
    pub fn representative(&self, group: &FiniteAbelianGroup, theta: &[u64]) -> Vec<Rational> {
        self.columns.iter().map(|chi| chi.value(group, theta)).collect()
    }

    /// True when the columns separate points of `X`.
    pub fn separates(&self, group: &FiniteAbelianGroup) -> bool {
        separates(group, self.columns.iter())
    }

    /// Pushout cocycle under the witness identification `X ≅ G/Z^n`.
    pub fn local_monoid(&self, group: &FiniteAbelianGroup) -> LocalMonoid {
        let reps: Vec<Vec<Rational>> = group.elements().iter().map(|t| self.representative(group, t)).collect();
        carry_from_representatives(group, &reps)
    }

    /// Soundness: separation plus exact equality of cocycles under the identification.
    pub fn verify(&self, d: &LocalMonoid) -> bool {
        self.separates(d.group()) && self.local_monoid(d.group()) == *d
    }
}

fn separates<'a>(group: &FiniteAbelianGroup, chars: impl Iterator<Item = &'a Character> + Clone) -> bool {
    group
        .elements()
        .iter()
        .skip(1)
        .all(|t| chars.clone().any(|chi| chi.units(group, t) != 0))
}

/// A search branch cut off because some pair equation could not be met.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedBranch {
    /// Multiplicities chosen so far, one per character in search order.
    pub assignment: Vec<u64>,
    /// The violated pair `(θ, θ')`.
    pub pair: (Vec<u64>, Vec<u64>),
    /// Remaining carry `c(θ,θ') − Σ m_χ t^χ(θ,θ')` at the cut.
    pub residual: u64,
    /// Largest amount the remaining characters could still contribute.
    pub capacity: u64,
}

/// Exhausted search: nothing satisfies the pair equations and separation within the bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    /// Per nonzero character, the multiplicity cap used.
    pub bounds: Vec<(Character, u64)>,
    /// Pruned branches, at most [`MAX_RECORDED_PRUNES`] of them.
    pub pruned: Vec<PrunedBranch>,
    pub pruned_total: u64,
    /// Solutions of the pair equations rejected for failing separation.
    pub rejected_nonseparating: u64,
}

pub const MAX_RECORDED_PRUNES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PushoutOutcome {
    Representable(PushoutWitness),
    NotRepresentable(InfeasibilityCertificate),
}

/// Both the answer without separation (`raw_feasible`) and the final answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutDecision {
    pub raw_feasible: bool,
    pub outcome: PushoutOutcome,
}

impl PushoutDecision {
    pub fn is_representable(&self) -> bool {
        matches!(self.outcome, PushoutOutcome::Representable(_))
    }

    pub fn witness(&self) -> Option<&PushoutWitness> {
        match &self.outcome {
            PushoutOutcome::Representable(w) => Some(w),
            PushoutOutcome::NotRepresentable(_) => None,
        }
    }
}

struct Search<'a> {
    d: &'a LocalMonoid,
    chars: Vec<Character>,
    pairs: Vec<(usize, usize)>,
    support: Vec<Vec<usize>>,
    bounds: Vec<u64>,
    /// `capacity[k][p]`: what characters `k..` can still contribute to pair `p`.
    capacity: Vec<Vec<u64>>,
    residual: Vec<u64>,
    assignment: Vec<u64>,
    pruned: Vec<PrunedBranch>,
    pruned_total: u64,
    rejected_nonseparating: u64,
    raw_feasible: bool,
}

impl Search<'_> {
    fn run(&mut self, k: usize) -> bool {
        if k == self.chars.len() {
            debug_assert!(self.residual.iter().all(|&r| r == 0));
            self.raw_feasible = true;
            let used = self
                .chars
                .iter()
                .zip(&self.assignment)
                .filter(|(_, &m)| m > 0)
                .map(|(c, _)| c);
            if separates(self.d.group(), used) {
                return true;
            }
            self.rejected_nonseparating += 1;
            return false;
        }
        let cap = self.support[k]
            .iter()
            .map(|&p| self.residual[p])
            .min()
            .unwrap_or(0)
            .min(self.bounds[k]);
        for m in 0..=cap {
            for &p in &self.support[k] {
                self.residual[p] -= m;
            }
            self.assignment.push(m);
            let blocked = (0..self.pairs.len()).find(|&p| self.residual[p] > self.capacity[k + 1][p]);
            let found = match blocked {
                Some(p) => {
                    self.record(p, k + 1);
                    false
                }
                None => self.run(k + 1),
            };
            if found {
                return true;
            }
            self.assignment.pop();
            for &p in &self.support[k] {
                self.residual[p] += m;
            }
        }
        false
    }

    fn record(&mut self, p: usize, next: usize) {
        self.pruned_total += 1;
        if self.pruned.len() < MAX_RECORDED_PRUNES {
            let g = self.d.group();
            let (a, b) = self.pairs[p];
            self.pruned.push(PrunedBranch {
                assignment: self.assignment.clone(),
                pair: (g.element(a), g.element(b)),
                residual: self.residual[p],
                capacity: self.capacity[next][p],
            });
        }
    }
}

/// Decides whether `d` is the pushout of an admissible monoid along coordinate summation.
///
/// Searches multiplicities `m_χ` over nonzero characters in lexicographic order,
/// each in ascending order, so the first witness found is the lexicographically
/// smallest multiplicity vector.
pub fn decide_pushout(d: &LocalMonoid) -> Result<PushoutDecision, LocalError> {
    d.validate().map_err(LocalError::InvalidCocycle)?;
    let g = d.group();
    let n = g.order() as usize;
    let chars: Vec<Character> = characters(g).into_iter().skip(1).collect();
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let tables: Vec<LocalMonoid> = chars.iter().map(|c| carry_of_character(c, g)).collect();
    let support: Vec<Vec<usize>> = tables
        .iter()
        .map(|t| {
            (0..pairs.len())
                .filter(|&p| t.carry_at(pairs[p].0, pairs[p].1) == 1)
                .collect()
        })
        .collect();
    let els = g.elements();
    // Cap from the (θ, −θ) equations.
    let bounds: Vec<u64> = tables
        .iter()
        .map(|t| {
            (1..n)
                .filter_map(|a| {
                    let neg = g.index_of(&g.neg(&els[a]));
                    (t.carry_at(a, neg) == 1).then(|| d.carry_at(a, neg))
                })
                .min()
                .expect("nonzero character is nonzero on some element")
        })
        .collect();
    let mut capacity = vec![vec![0u64; pairs.len()]; chars.len() + 1];
    for k in (0..chars.len()).rev() {
        capacity[k] = capacity[k + 1].clone();
        for &p in &support[k] {
            capacity[k][p] += bounds[k];
        }
    }
    let residual: Vec<u64> = pairs.iter().map(|&(a, b)| d.carry_at(a, b)).collect();
    let mut search = Search {
        d,
        chars,
        pairs,
        support,
        bounds,
        capacity,
        residual,
        assignment: Vec::new(),
        pruned: Vec::new(),
        pruned_total: 0,
        rejected_nonseparating: 0,
        raw_feasible: false,
    };
    if let Some(p) = (0..search.pairs.len()).find(|&p| search.residual[p] > search.capacity[0][p]) {
        search.record(p, 0);
    } else if search.run(0) {
        let multiplicities: Vec<(Character, u64)> = search
            .chars
            .iter()
            .cloned()
            .zip(search.assignment.iter().copied())
            .filter(|(_, m)| *m > 0)
            .collect();
        let witness = build_witness(g, multiplicities);
        debug_assert!(witness.verify(d));
        return Ok(PushoutDecision {
            raw_feasible: true,
            outcome: PushoutOutcome::Representable(witness),
        });
    }
    Ok(PushoutDecision {
        raw_feasible: search.raw_feasible,
        outcome: PushoutOutcome::NotRepresentable(InfeasibilityCertificate {
            bounds: search
                .chars
                .iter()
                .cloned()
                .zip(search.bounds.iter().copied())
                .collect(),
            pruned: search.pruned,
            pruned_total: search.pruned_total,
            rejected_nonseparating: search.rejected_nonseparating,
        }),
    })
}

fn build_witness(g: &FiniteAbelianGroup, multiplicities: Vec<(Character, u64)>) -> PushoutWitness {
    let columns: Vec<Character> = multiplicities
        .iter()
        .flat_map(|(c, m)| std::iter::repeat(c.clone()).take(*m as usize))
        .collect();
    let rank = columns.len();
    let gens: Vec<Vec<Rational>> = (0..g.ngens())
        .map(|j| columns.iter().map(|c| c.generator_values(g)[j].clone()).collect())
        .collect();
    let monoid = AdmissibleMonoid::new(rank, &gens).expect("generator ranks agree");
    PushoutWitness {
        multiplicities,
        columns,
        monoid,
    }
}

/// A submonoid `D ⊆ N ⊕ F`, generated by `generators`, with designated `unit ∈ D`
/// playing the role of `1 ∈ N ⊆ D`. Elements are `(a, b)` with `b` coordinates in `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmonoidPresentation {
    pub torsion: FiniteAbelianGroup,
    pub generators: Vec<(u64, Vec<u64>)>,
    pub unit: (u64, Vec<u64>),
}

/// Carry presentation of a submonoid together with the minimal lifts `δ_θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmonoidLocal {
    pub local: LocalMonoid,
    /// `δ_θ` for each `θ ∈ X` in enumeration order.
    pub minimal_lifts: Vec<(u64, Vec<u64>)>,
}

/// Builds `(X, c)` for a submonoid by brute force over first coordinates `≤ bound`.
pub fn local_monoid_from_submonoid(p: &SubmonoidPresentation, bound: u64) -> Result<SubmonoidLocal, LocalError> {
    let f = &p.torsion;
    let k = f.ngens();
    for (i, (_, b)) in p.generators.iter().enumerate() {
        if !f.is_element(b) {
            return Err(LocalError::MalformedGenerator(i));
        }
    }
    if !f.is_element(&p.unit.1) {
        return Err(LocalError::MalformedGenerator(p.generators.len()));
    }
    if p.unit.0 == 0 {
        return Err(LocalError::InfiniteQuotient);
    }
    let to_vec = |(a, b): &(u64, Vec<u64>)| -> Vec<BigInt> {
        std::iter::once(BigInt::from(*a))
            .chain(b.iter().map(|&x| BigInt::from(x)))
            .collect()
    };
    // Y = (Z ⊕ F)/⟨unit⟩; X is the image of D^gp in Y, presented as Z^m / K.
    let m = p.generators.len();
    let mut rel_cols: Vec<Vec<BigInt>> = f
        .invariant_factors()
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let mut c = vec![BigInt::zero(); 1 + k];
            c[1 + j] = BigInt::from(d);
            c
        })
        .collect();
    rel_cols.push(to_vec(&p.unit));
    let gen_cols: Vec<Vec<BigInt>> = p.generators.iter().map(to_vec).collect();
    let mut all = gen_cols.clone();
    all.extend(rel_cols);
    let ker = integer_kernel(&IntMatrix::from_columns(&all, 1 + k));
    let k_cols: Vec<Vec<BigInt>> = ker.to_rows().into_iter().map(|r| r[..m].to_vec()).collect();
    let coker = cokernel(&IntMatrix::from_columns(&k_cols, m));
    if coker.free_rank > 0 {
        return Err(LocalError::InfiniteQuotient);
    }
    let x = coker.torsion.clone();
    let gen_class: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut e = vec![BigInt::zero(); m];
            e[i] = BigInt::from(1);
            coker.classify(&e).0
        })
        .collect();

    // levels[a]: F-index -> class in X, for elements (a, b) ∈ D.
    let mut levels: Vec<BTreeMap<usize, Vec<u64>>> = Vec::new();
    for a in 0..=bound {
        let mut level: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        if a == 0 {
            level.insert(0, x.zero());
        }
        for (i, (ga, gb)) in p.generators.iter().enumerate() {
            if *ga == 0 || *ga > a {
                continue;
            }
            for (bi, cls) in &levels[(a - ga) as usize] {
                let b = f.add(&f.element(*bi), gb);
                level.entry(f.index_of(&b)).or_insert_with(|| x.add(cls, &gen_class[i]));
            }
        }
        let mut frontier: Vec<usize> = level.keys().copied().collect();
        while let Some(bi) = frontier.pop() {
            let cls = level[&bi].clone();
            for (i, (ga, gb)) in p.generators.iter().enumerate() {
                if *ga != 0 {
                    continue;
                }
                let b = f.index_of(&f.add(&f.element(bi), gb));
                if let std::collections::btree_map::Entry::Vacant(e) = level.entry(b) {
                    e.insert(x.add(&cls, &gen_class[i]));
                    frontier.push(b);
                }
            }
        }
        levels.push(level);
    }
    let unit_idx = f.index_of(&p.unit.1);
    if p.unit.0 > bound || !levels[p.unit.0 as usize].contains_key(&unit_idx) {
        return Err(LocalError::UnitNotInMonoid);
    }

    let xs = x.elements();
    let mut lifts: Vec<Option<(u64, Vec<u64>)>> = vec![None; xs.len()];
    for (a, level) in levels.iter().enumerate() {
        let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
        for (bi, cls) in level {
            by_class.entry(x.index_of(cls)).or_default().push(*bi);
        }
        for (ci, bs) in by_class {
            if lifts[ci].is_some() {
                continue;
            }
            if bs.len() > 1 {
                return Err(LocalError::NotLocal {
                    class: xs[ci].clone(),
                    detail: format!("several minimal elements at first coordinate {a}"),
                });
            }
            lifts[ci] = Some((a as u64, f.element(bs[0])));
        }
    }
    let lifts: Vec<(u64, Vec<u64>)> = lifts
        .into_iter()
        .enumerate()
        .map(|(ci, l)| {
            l.ok_or_else(|| LocalError::BoundExhausted {
                class: xs[ci].clone(),
                bound,
            })
        })
        .collect::<Result<_, _>>()?;

    // Every element over θ is δ_θ + k·unit.
    let offset = |cls: usize, a: u64, b: &[u64]| -> Option<u64> {
        let (da, db) = &lifts[cls];
        if a < *da || (a - da) % p.unit.0 != 0 {
            return None;
        }
        let q = (a - da) / p.unit.0;
        (f.add(db, &f.scale(q, &p.unit.1)) == b).then_some(q)
    };
    for (a, level) in levels.iter().enumerate() {
        for (bi, cls) in level {
            let ci = x.index_of(cls);
            if offset(ci, a as u64, &f.element(*bi)).is_none() {
                return Err(LocalError::NotLocal {
                    class: cls.clone(),
                    detail: format!(
                        "({a}, {:?}) is not the minimal lift plus a multiple of the unit",
                        f.element(*bi)
                    ),
                });
            }
        }
    }
    let n = xs.len();
    let mut table = vec![0; n * n];
    for s in 0..n {
        for t in s..n {
            let a = lifts[s].0 + lifts[t].0;
            let b = f.add(&lifts[s].1, &lifts[t].1);
            let sum = x.index_of(&x.add(&xs[s], &xs[t]));
            let c = offset(sum, a, &b).ok_or_else(|| LocalError::NotLocal {
                class: xs[sum].clone(),
                detail: "sum of minimal lifts leaves the fiber".into(),
            })?;
            table[s * n + t] = c;
            table[t * n + s] = c;
        }
    }
    let local = LocalMonoid { group: x, table };
    local.validate().map_err(LocalError::InvalidCocycle)?;
    Ok(SubmonoidLocal {
        local,
        minimal_lifts: lifts,
    })
}

#[cfg(test)]
mod tests;
