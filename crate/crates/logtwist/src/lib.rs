//! Exact combinatorics of generalized log twisted curves.
//!
//! Layers, bottom up: [`lattice`] (normal forms, finite abelian groups),
//! [`admissible`] (admissible monoids and groups in `Q^n`), [`local`]
//! (carry-cocycle local monoids and the pushout decision), [`curve`] (marked
//! dual graphs with twisting data) and [`contraction`] (contractions, charts,
//! stabilization, initial contractions, counting).

pub mod admissible;
pub mod contraction;
pub mod curve;
pub mod lattice;
pub mod local;
pub mod random;
