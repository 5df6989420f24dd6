//! Offset tuples of polytope norms that admit prescribed rational
//! dependencies among unit vectors, and sampling of offsets that avoid them.
//!
//! Fix normals `o_1..o_h` and a scheme `u_j = Σ_i a_ji u_i`
//! (`j = 1..dℓ+1`). If every `u_j` lies on facet `φ(j)`, each offset
//! `t_φ(j) = ±o_φ(j)·u_j` is a linear form in the `dℓ` coordinates of
//! `u_1..u_ℓ`. Any `dℓ+1` such forms are dependent, so the offsets satisfy
//! one linear equation: the tuple lies on a hyperplane of `ℚ^h`.

mod family;
mod sample;
mod scheme;

pub use family::{achievability_hyperplanes, full_family, is_achievable, HyperplaneFamily, Plane, FAMILY_LIMIT};
pub use sample::{
    sample_generic_polytope, sample_generic_polytope_for_class, ClassCertificate, GenericPolytopeNorm, SchemeClass,
};
pub use scheme::{rationals_of_height, DependencyScheme};

use thiserror::Error;

use crate::norms::NormError;
use crate::qlinalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenericityError {
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("facet assignment is not injective")]
    NotInjective,
    #[error("family would hold up to {planes} planes, above the limit of {limit}")]
    TooLarge { planes: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("retry budget exhausted: every draw hit a plane")]
    RetryBudgetExhausted,
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
