//! Norms on R^d: symmetric polytopes with rational facets (exact) and a few
//! smooth strictly convex norms (floating point), plus the geometry needed to
//! compare their unit balls.

mod approx;
mod hausdorff;
pub mod hull;
mod net;
mod polytope;
mod shape;
mod smooth;

pub use approx::{
    approximate_polytope, polytope_from_points, sample_boundary, strictify, Approximation, BoundarySample,
};
pub use hausdorff::{boundary_witness, hausdorff_distance, hausdorff_to_norm};
pub use net::{epsilon_net, epsilon_net_indices};
pub use polytope::{near_round_polytope, random_polytope_norm, Facet, PolytopeNorm};
pub use shape::{PolytopeShape, ShapeFacet};
pub use smooth::SmoothNorm;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qlinalg::{LinalgError, QVector, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("facet normals do not span R^{0}; the unit ball is unbounded")]
    Unbounded(usize),
    #[error("zero vector has no boundary point")]
    ZeroVector,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("norm is not strictly convex")]
    NotStrictlyConvex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("point is not on the unit sphere (norm {0})")]
    NotOnBoundary(f64),
    #[error("approximation failed after {attempts} attempts (max facet diameter {diameter}, hausdorff {hausdorff})")]
    ApproximationFailed { attempts: usize, diameter: f64, hausdorff: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Any supported norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpec", into = "NormSpec")]
pub enum Norm {
    Polytope(PolytopeNorm),
    Smooth(SmoothNorm),
}

impl Norm {
    pub fn dim(&self) -> usize {
        match self {
            Norm::Polytope(p) => p.dim(),
            Norm::Smooth(s) => s.dim(),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, NormError> {
        match self {
            Norm::Polytope(p) => p.eval_f64(x),
            Norm::Smooth(s) => s.eval_f64(x),
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        matches!(self, Norm::Smooth(_))
    }

    pub fn as_polytope(&self) -> Option<&PolytopeNorm> {
        match self {
            Norm::Polytope(p) => Some(p),
            Norm::Smooth(_) => None,
        }
    }

    pub fn euclidean(d: usize) -> Norm {
        Norm::Smooth(SmoothNorm::Euclidean { d })
    }
}

impl From<PolytopeNorm> for Norm {
    fn from(p: PolytopeNorm) -> Self {
        Norm::Polytope(p)
    }
}

impl From<SmoothNorm> for Norm {
    fn from(s: SmoothNorm) -> Self {
        Norm::Smooth(s)
    }
}

/// `x / ||x||` for a nonzero rational `x`, exact.
pub fn boundary_point_exact(norm: &PolytopeNorm, x: &QVector) -> Result<QVector, NormError> {
    let n = norm.eval_exact(x)?;
    if n.is_zero() {
        return Err(NormError::ZeroVector);
    }
    Ok(x.scale(&n.recip()))
}

/// `x / ||x||` in floating point.
pub fn boundary_point(norm: &Norm, x: &[f64]) -> Result<Vec<f64>, NormError> {
    let n = norm.eval_f64(x)?;
    if n == 0.0 {
        return Err(NormError::ZeroVector);
    }
    Ok(x.iter().map(|v| v / n).collect())
}

/// JSON form shared by all norms.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSpec {
    Polytope { d: usize, facets: Vec<Facet> },
    Euclidean { d: usize },
    Lp { d: usize, p: f64 },
    Strictified { base: Box<NormSpec>, epsilon: f64 },
}

impl TryFrom<NormSpec> for Norm {
    type Error = NormError;

    fn try_from(spec: NormSpec) -> Result<Self, NormError> {
        Ok(match spec {
            NormSpec::Polytope { d, facets } => Norm::Polytope(PolytopeNorm::new(d, facets)?),
            NormSpec::Euclidean { d } => {
                if d == 0 {
                    return Err(NormError::InvalidParameter("dimension must be positive".into()));
                }
                Norm::Smooth(SmoothNorm::Euclidean { d })
            }
            NormSpec::Lp { d, p } => Norm::Smooth(SmoothNorm::lp(d, p)?),
            NormSpec::Strictified { base, epsilon } => match Norm::try_from(*base)? {
                Norm::Polytope(b) => Norm::Smooth(SmoothNorm::strictified(b, epsilon)?),
                Norm::Smooth(_) => {
                    return Err(NormError::InvalidNorm("strictified base must be a polytope".into()))
                }
            },
        })
    }
}

impl From<Norm> for NormSpec {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Polytope(p) => p.into(),
            Norm::Smooth(SmoothNorm::Euclidean { d }) => NormSpec::Euclidean { d },
            Norm::Smooth(SmoothNorm::Lp { d, p }) => NormSpec::Lp { d, p },
            Norm::Smooth(SmoothNorm::Strictified { base, epsilon }) => {
                NormSpec::Strictified { base: Box::new(base.into()), epsilon }
            }
        }
    }
}

impl TryFrom<NormSpec> for PolytopeNorm {
    type Error = NormError;

    fn try_from(spec: NormSpec) -> Result<Self, NormError> {
        match Norm::try_from(spec)? {
            Norm::Polytope(p) => Ok(p),
            Norm::Smooth(_) => Err(NormError::InvalidNorm("expected a polytope norm".into())),
        }
    }
}

impl From<PolytopeNorm> for NormSpec {
    fn from(p: PolytopeNorm) -> Self {
        NormSpec::Polytope { d: p.dim(), facets: p.facets().to_vec() }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), NormError> {
    if expected != got {
        return Err(NormError::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[allow(dead_code)]
pub(crate) fn rational_vec(xs: &[f64]) -> Option<QVector> {
    let v: Option<Vec<Rational>> = xs.iter().map(|&x| Rational::from_f64(x)).collect();
    v.and_then(|v| QVector::new(v).ok())
}

pub fn euclid_len(x: &[f64]) -> f64 {
    euclid(x)
}
