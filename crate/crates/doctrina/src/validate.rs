//! Finite-model checks of proved sequents.

use doctrina_core::logic::{Sequent, Theory};
use doctrina_core::semantics::{enumerate_models, satisfies, FiniteModel};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub max_size: usize,
    /// Models of the theory that were checked, one per isomorphism class.
    pub models: usize,
    /// Models of the theory falsifying the sequent.
    pub violations: usize,
}

/// The models of `theory` with carriers of size at most `max_size`, one per
/// isomorphism class.
pub fn models_of(
    theory: &Theory,
    max_size: usize,
    max_table_bits: u32,
) -> Result<Vec<FiniteModel>, doctrina_core::Error> {
    Ok(enumerate_models(theory.signature(), max_size, max_table_bits)?
        .filter(|m| m.is_canonical(theory.signature()) && satisfies(m, theory))
        .collect())
}

pub fn check(models: &[FiniteModel], theory: &Theory, seq: &Sequent) -> Validation {
    let sig = theory.signature();
    Validation {
        max_size: models.iter().flat_map(|m| m.sizes().iter().copied()).max().unwrap_or(0),
        models: models.len(),
        violations: models.iter().filter(|m| m.counterexample(sig, seq).is_some()).count(),
    }
}

pub fn validate(
    theory: &Theory,
    seq: &Sequent,
    max_size: usize,
    max_table_bits: u32,
) -> Result<Validation, doctrina_core::Error> {
    let models = models_of(theory, max_size, max_table_bits)?;
    let mut v = check(&models, theory, seq);
    v.max_size = max_size;
    Ok(v)
}
