//! Symbolic engine for the syntactic doctrine of a universal theory and its
//! free existential completion.
//!
//! The crate is organised bottom-up:
//!
//! * [`terms`]: multi-sorted signatures, contexts, terms and the category of
//!   term tuples (composition is substitution, product is concatenation).
//! * [`logic`]: quantifier-free Horn/coherent formulas, sequents, universal
//!   theories and a bounded chase with congruence closure deciding the fibre
//!   order (semi-decision: `Proved` or `Unknown`).
//! * [`completion`]: fibres of the existential completion as finite sets of
//!   `(witness context, body)` pairs, their order via witnessing arrows,
//!   lattice operations, reindexing, `Σ_d`, the unit and equality.
//! * [`semantics`]: finite models as morphisms into the powerset doctrine,
//!   evaluation, and exhaustive small-model enumeration.
//! * [`herbrand`]: witness extraction for existential goals, Morleyisation of
//!   classical axioms and the `∀/∀` sequent reduction.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command line
//! live in the `doctrina` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod completion;
mod error;
pub mod herbrand;
pub mod logic;
pub mod semantics;
pub mod terms;

pub use error::{Error, Result};
