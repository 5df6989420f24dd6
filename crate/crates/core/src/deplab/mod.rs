//! Exact combinatorics of direction vectors: span audits, greedy independent
//! selection, forest-bound certificates, matroid partition and the
//! odd-distance coloring built on top of it.
//!
//! Indices are 0-based throughout.

mod coloring;
mod counting;
mod forest;
mod partition;
mod span;

pub use coloring::{odd_distance_coloring, OddColoring};
pub use counting::{entropy_check, ungar_directions, EntropyCheck, UngarReport};
pub use forest::{forest_bound_certify, half_n_log_n, CertNode, CosetClass, ForestCertificate};
pub use partition::{matroid_partition, PartitionResult};
pub use span::{
    greedy_select, span_audit, span_audit_with, AuditMethod, GreedySelection, SpanAuditReport, Verdict,
    EXHAUSTIVE_BUDGET,
};

use thiserror::Error;

use crate::norms::NormError;
use crate::qlinalg::{QVector, SpanBuilder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeplabError {
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{k} vectors exceed the exhaustive audit budget of {budget}; use the partition method")]
    OverBudget { k: usize, budget: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("span audit violated: {} vectors lie in the span of {:?}", .0.spanned.len(), .0.witness.as_deref().unwrap_or(&[]))]
    AuditViolated(Box<SpanAuditReport>),
    #[error("direction vectors are linearly dependent")]
    Dependent,
    #[error("edge {edge} ({x}, {y}) is not parallel to any direction")]
    EdgeNotAligned { edge: usize, x: usize, y: usize },
    #[error("edges of direction {direction} contain a cycle (closed by edge {edge})")]
    NotForest { direction: usize, edge: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("edge {edge} refers to vertex {index}, out of range")]
    IndexOutOfRange { edge: usize, index: usize },
    #[error("input must be sorted in descending order")]
    Unsorted,
    #[error("no partition exists: {witness:?} has rank {rank}")]
    Infeasible { witness: Vec<usize>, rank: usize },
    #[error("exact point set required")]
    NotExact,
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Checks that all vectors are nonzero and share one dimension; returns it
/// (0 for an empty list).
fn check_vectors(vectors: &[QVector]) -> Result<usize, DeplabError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let dim = first.dim();
    for (i, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(DeplabError::DimensionMismatch { expected: dim, got: v.dim() });
        }
        if v.is_zero() {
            return Err(DeplabError::ZeroVector(i));
        }
    }
    Ok(dim)
}

/// Lowest-index basis of the given indices, in increasing order.
fn greedy_basis(vectors: &[QVector], dim: usize, indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut span = SpanBuilder::new(dim);
    indices.into_iter().filter(|&i| span.insert(&vectors[i])).collect()
}

/// All indices whose vector lies in the span of `basis`.
fn closure(vectors: &[QVector], dim: usize, basis: &[usize]) -> Vec<usize> {
    let mut span = SpanBuilder::new(dim);
    for &i in basis {
        span.insert(&vectors[i]);
    }
    (0..vectors.len()).filter(|&i| span.contains(&vectors[i])).collect()
}

fn rank_of(vectors: &[QVector], dim: usize, indices: &[usize]) -> usize {
    greedy_basis(vectors, dim, indices.iter().copied()).len()
}
