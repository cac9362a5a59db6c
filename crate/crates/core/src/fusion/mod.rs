//! Principal subspaces as explicit cyclic modules and the u-graded
//! characters of their fusion products.

mod module;
mod product;

pub use module::{nilpotent_module, principal_subspace, Bidegree, Column, CyclicModule, ModuleSpec};
pub use product::{
    default_points, fusion_character, nilpotent_fusion_relations, FusionFiltration, FusionResult, FusionSpec,
};

use thiserror::Error;

use crate::gradedchar::{GradedCharacter, Reweight, Truncation};
use crate::presented::{build_presentation_a, delta_vector, graded_character, InitialConditions, Partition, PresentationError};
use crate::FieldMode;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("invalid input: {0}")]
    Config(String),
    #[error("evaluation points must be pairwise distinct")]
    CoincidentPoints,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Character of `W_{i,k}` on `window`, with the q-degree of every generator
/// lowered by `2N`.
pub fn shifted_principal_character(i: usize, k: usize, n: i64, window: &Truncation, mode: FieldMode) -> Result<GradedCharacter, FusionError> {
    if k == 0 || i > k {
        return Err(FusionError::Config(format!("need k ≥ 1 and 0 ≤ i ≤ k, got i={i}, k={k}")));
    }
    let lambda = Partition::row(k).expect("k ≥ 1");
    let ic = InitialConditions { c: delta_vector(i + 1, k), d: Vec::new() };
    let p = build_presentation_a(&lambda, &ic)?;
    let ch = graded_character(&p, window, mode)?.character;
    Ok(ch.reweight(&Reweight::new(1, 0, -2 * n, 0)))
}
