//! Exact linear algebra over the rationals.
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! every routine here is deterministic for a given input.

mod matrix;
mod rational;

pub use matrix::{
    nullspace, rank, row_reduce, span_membership, QMatrix, QVector, RowEchelon, SpanBuilder,
};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector must have dimension at least 1")]
    EmptyVector,
    #[error("ragged matrix: row {row} has length {len}, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
