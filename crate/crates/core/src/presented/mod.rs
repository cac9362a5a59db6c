//! Graded commutative algebras given by generating series and series
//! relations, and the brute-force computation of their characters.
//!
//! Each graded component is finite-dimensional: its dimension is the number
//! of monomials of that degree minus the rank of the relation matrix, whose
//! rows are all products `g · M` of a relation coefficient `g` with a
//! monomial `M` of the complementary degree.

mod monomial;
mod partition;
mod presentation;
mod quotient;
mod relations;

pub use monomial::{enumerate_monomials, grevlex_cmp, Monomial, Tridegree, VariableLayout};
pub use partition::{delta_vector, parse_list, InitialConditions, Partition};
pub use presentation::{
    build_presentation_a, build_presentation_quadratic, CoefficientRange, Factor, GeneratorFamily, Presentation,
    RelationFamily,
};
pub use quotient::{
    component_dimension, graded_character, normal_form_basis, relation_generators, CharacterComputation,
    ComponentBasis, ComponentDimension, QuotientEngine,
};
pub use relations::{relation_coefficients, RelationCoefficient};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("not a partition (need λ_0 ≥ 1 and weakly decreasing parts): {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("initial conditions have lengths {found:?}, expected (λ_0, s) = {expected:?}")]
    LengthMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("presentation has no generator families")]
    NoFamilies,
    #[error("relation {0} has no factors")]
    EmptyRelation(usize),
    #[error("relation {0} has a factor with power zero")]
    ZeroPower(usize),
    #[error("relation {relation} refers to family {family}, which does not exist")]
    UnknownFamily { relation: usize, family: usize },
    #[error("matrix and shift vector sizes disagree")]
    Shape,
    #[error("matrix is not symmetric at ({i}, {j})")]
    NonSymmetric { i: usize, j: usize },
    #[error("matrix entry ({i}, {j}) is negative")]
    NegativeEntry { i: usize, j: usize },
    #[error("diagonal entry {0} must be positive and even")]
    BadDiagonal(usize),
    #[error("shift {0} is negative")]
    NegativeShift(usize),
    #[error("a z-bound is required to enumerate components")]
    UnboundedWindow,
    #[error("cannot parse {0}")]
    Parse(String),
}
