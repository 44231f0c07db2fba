//! Exact integer and rational linear algebra: normal forms, lattices, finite abelian groups.

mod group;
mod matrix;
mod normal_form;
mod rational;

pub use group::{ext1, ext1_to_z, FiniteAbelianGroup, GroupHom};
pub use matrix::IntMatrix;
pub use normal_form::{
    cokernel, hermite_normal_form, integer_kernel, lattice_intersection, smith_normal_form, solve_congruences,
    solve_integer, Cokernel, SmithForm,
};
pub use rational::{
    common_denominator, floor, format_rational, frac, is_nonnegative, parse_rational, rat, rat_int, scale_to_integers,
    Rational,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invariant factor {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("invariant factors {0:?} do not form a divisibility chain")]
    NotDivisibilityChain(Vec<u64>),
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0:?} is not an element of the target group")]
    NotAnElement(Vec<u64>),
    #[error("image of generator {generator} has order not dividing the generator order")]
    ImageOrder { generator: usize },
}

#[cfg(test)]
mod tests;
