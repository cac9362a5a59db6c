//! Exact arithmetic and sparse linear algebra over the rationals and prime
//! fields. Everything here is a pure function of its inputs.

mod echelon;
mod field;
pub mod primes;
mod sparse;

pub use echelon::EchelonBasis;
pub use field::{format_rational, Field, FieldTag, PrimeField, Rationals};
pub use primes::PrimePair;
pub use sparse::{certified_rank, CertifiedRank, IntegerMatrix, RankEscalation, RankMode, SparseMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("row {row} has {len} entries, expected {cols}")]
    RaggedRow { row: usize, len: usize, cols: usize },
}
