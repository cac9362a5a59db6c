//! Closed fermionic formulas evaluated on a truncation window.
//!
//! Every sum here is `Σ_x z^{..} u^{..} q^{xQx/2 + l·x + c} / Π (q)_{x_i}`
//! over nonnegative integer vectors. The terms below a q-level are found by
//! exact lattice-point enumeration, so each evaluator is complete on the
//! window it reports.

mod enumerate;
mod formulas;
mod limit;
mod sum;

pub use enumerate::{points_below, EnumerationError, QuadraticForm, VarBound, MAX_POINTS};
pub use formulas::{
    a_matrix, b_matrix, character_a_lambda, character_a_lambda_cd, character_w_fusion, gmf_spec, gordon_character,
    gordon_spec, gram_matrix_for_partition, lattice_principal_character, lattice_spec, shift_vector, w_fusion_spec,
    FusionPair, LatticeSpec,
};
pub use limit::{
    approximant, character_l_fusion, p_exponent, s_from_n, s_lattice_character, shift_reweight, shifted_spec,
    LimitCharacter, SLatticeReport, DEFAULT_N_MAX,
};
pub use sum::FermionicSumSpec;

use thiserror::Error;

use crate::gradedchar::GradedCharacter;

#[derive(Debug, Error)]
pub enum FermionicError {
    #[error("invalid input: {0}")]
    Config(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("approximants for N = {} and N = {n_max} still differ", n_max - 1)]
    NoStabilization { n_max: usize, previous: Box<GradedCharacter>, last: Box<GradedCharacter> },
}
