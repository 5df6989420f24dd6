//! Seeded point-set constructions with many unit distances.
//!
//! Every random choice is retried (up to [`RETRY_BUDGET`] times) until the
//! Minkowski sums it produces are all distinct: exactly in rational mode,
//! within [`TAU`](crate::distgraph::TAU) in float mode.

mod bipartite;
mod hypercube;
mod triangle;

pub use bipartite::{bipartite_construction, sphere_intersection_samples};
pub use hypercube::hypercube_embedding;
pub use triangle::{compose_base3, triangle_power, unit_circle_partner};

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::distgraph::{find_close_pair, GraphError, PointSet, TAU};
use crate::norms::{boundary_point, boundary_point_exact, Norm, NormError, PolytopeNorm};
use crate::qlinalg::QVector;

pub const RETRY_BUDGET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("retry budget exhausted while choosing {0}")]
    RetryBudgetExhausted(String),
    #[error("norm is not strictly convex")]
    NotStrictlyConvex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    /// `{0, x, y}` with all three pairwise distances 1.
    ZeroXYTriangle,
    /// `{x, 2x, ..., kx}`.
    ArithmeticChain,
    /// `{0, z}`.
    ZeroZPair,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinkowskiFactor {
    pub kind: FactorKind,
    pub summands: PointSet,
}

/// Translated copy group used by [`compose_base3`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub exponent: u32,
    pub translation: Vec<f64>,
    pub factors: Vec<MinkowskiFactor>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionResult {
    pub points: PointSet,
    pub promised_edges: u64,
    /// Minkowski factors of the whole set (empty when `blocks` is used).
    pub factors: Vec<MinkowskiFactor>,
    pub blocks: Vec<Block>,
    pub seed: u64,
}

/// Points of either mode, kept as the running Minkowski sum.
#[derive(Clone, Debug)]
pub(crate) enum Sum {
    Exact(Vec<QVector>),
    Float(Vec<Vec<f64>>),
}

#[derive(Clone, Debug)]
pub(crate) enum Vector {
    Exact(QVector),
    Float(Vec<f64>),
}

impl Vector {
    pub(crate) fn scaled(&self, s: i64) -> Vector {
        match self {
            Vector::Exact(v) => Vector::Exact(v.scale(&s.into())),
            Vector::Float(v) => Vector::Float(v.iter().map(|x| x * s as f64).collect()),
        }
    }

    pub(crate) fn add(&self, o: &Vector) -> Vector {
        match (self, o) {
            (Vector::Exact(a), Vector::Exact(b)) => Vector::Exact(a + b),
            (Vector::Float(a), Vector::Float(b)) => Vector::Float(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => unreachable!("mixed modes"),
        }
    }
}

impl Sum {
    pub(crate) fn origin(exact: bool, d: usize) -> Sum {
        if exact {
            Sum::Exact(vec![QVector::zeros(d)])
        } else {
            Sum::Float(vec![vec![0.0; d]])
        }
    }

    /// `self + summands`, or `None` if two sums coincide.
    pub(crate) fn extend(&self, summands: &[Vector]) -> Option<Sum> {
        match self {
            Sum::Exact(pts) => {
                let mut out = Vec::with_capacity(pts.len() * summands.len());
                for s in summands {
                    let Vector::Exact(s) = s else { unreachable!("mixed modes") };
                    out.extend(pts.iter().map(|p| p + s));
                }
                let mut seen = HashSet::with_capacity(out.len());
                out.iter().all(|p| seen.insert(p)).then(|| Sum::Exact(out.clone()))
            }
            Sum::Float(pts) => {
                let mut out = Vec::with_capacity(pts.len() * summands.len());
                for s in summands {
                    let Vector::Float(s) = s else { unreachable!("mixed modes") };
                    out.extend(pts.iter().map(|p| p.iter().zip(s).map(|(a, b)| a + b).collect::<Vec<f64>>()));
                }
                find_close_pair(&out, TAU).is_none().then_some(Sum::Float(out))
            }
        }
    }

    pub(crate) fn into_pointset(self, d: usize) -> Result<PointSet, ConstructionError> {
        Ok(match self {
            Sum::Exact(p) => PointSet::exact(d, p)?,
            Sum::Float(p) => PointSet::float(d, p, TAU)?,
        })
    }
}

pub(crate) fn factor(kind: FactorKind, summands: &[Vector], d: usize) -> Result<MinkowskiFactor, ConstructionError> {
    let summands = match summands.first() {
        Some(Vector::Exact(_)) => PointSet::exact(
            d,
            summands.iter().map(|v| match v {
                Vector::Exact(q) => q.clone(),
                Vector::Float(_) => unreachable!("mixed modes"),
            }).collect(),
        )?,
        _ => PointSet::float(
            d,
            summands.iter().map(|v| match v {
                Vector::Float(q) => q.clone(),
                Vector::Exact(_) => unreachable!("mixed modes"),
            }).collect(),
            TAU,
        )?,
    };
    Ok(MinkowskiFactor { kind, summands })
}

/// Uniformly random direction on the Euclidean sphere, by rejection.
pub(crate) fn random_direction<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = crate::norms::euclid_len(&v);
        if l > 1e-3 && l <= 1.0 {
            return v.iter().map(|x| x / l).collect();
        }
    }
}

/// Random unit vector: exact for polytope norms, float otherwise.
pub(crate) fn random_unit<R: Rng>(norm: &Norm, rng: &mut R) -> Result<Vector, ConstructionError> {
    let d = norm.dim();
    Ok(match norm {
        Norm::Polytope(p) => Vector::Exact(random_exact_unit(p, rng)?),
        Norm::Smooth(_) => Vector::Float(boundary_point(norm, &random_direction(d, rng))?),
    })
}

pub(crate) fn random_exact_unit<R: Rng>(p: &PolytopeNorm, rng: &mut R) -> Result<QVector, ConstructionError> {
    loop {
        let v: Vec<i64> = (0..p.dim()).map(|_| rng.gen_range(-1000..=1000)).collect();
        let v = QVector::from_ints(&v);
        if !v.is_zero() {
            return Ok(boundary_point_exact(p, &v)?);
        }
    }
}

pub(crate) fn rng_for(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
