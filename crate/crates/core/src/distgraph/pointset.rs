use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::qlinalg::{QVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Finite set of distinct points in R^d, either exact rationals or floats.
#[derive(Clone, Debug, PartialEq)]
pub enum PointSet {
    Exact { d: usize, points: Vec<QVector> },
    Float { d: usize, points: Vec<Vec<f64>> },
}

/// Default tolerance for float comparisons.
pub const TAU: f64 = 1e-9;

impl PointSet {
    pub fn exact(d: usize, points: Vec<QVector>) -> Result<Self, GraphError> {
        let mut seen: HashSet<&QVector> = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != d {
                return Err(GraphError::DimensionMismatch { expected: d, got: p.dim() });
            }
            if !seen.insert(p) {
                let j = points.iter().position(|q| q == p).expect("seen before");
                return Err(GraphError::DuplicatePoint(j, i));
            }
        }
        Ok(PointSet::Exact { d, points })
    }

    /// Float points, distinct up to `tau` in every coordinate.
    pub fn float(d: usize, points: Vec<Vec<f64>>, tau: f64) -> Result<Self, GraphError> {
        for p in &points {
            if p.len() != d {
                return Err(GraphError::DimensionMismatch { expected: d, got: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(GraphError::InvalidInput("non-finite coordinate".into()));
            }
        }
        if let Some((i, j)) = find_close_pair(&points, tau) {
            return Err(GraphError::DuplicatePoint(i.min(j), i.max(j)));
        }
        Ok(PointSet::Float { d, points })
    }

    pub fn dim(&self) -> usize {
        match self {
            PointSet::Exact { d, .. } | PointSet::Float { d, .. } => *d,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Exact { points, .. } => points.len(),
            PointSet::Float { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            PointSet::Exact { .. } => Mode::Exact,
            PointSet::Float { .. } => Mode::Float,
        }
    }

    pub fn exact_points(&self) -> Option<&[QVector]> {
        match self {
            PointSet::Exact { points, .. } => Some(points),
            PointSet::Float { .. } => None,
        }
    }

    /// Coordinates as floats (rounded in exact mode).
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        match self {
            PointSet::Exact { points, .. } => points.iter().map(QVector::to_f64).collect(),
            PointSet::Float { points, .. } => points.clone(),
        }
    }

    /// Points reordered so that new index `i` holds old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PointSet {
        match self {
            PointSet::Exact { d, points } => {
                PointSet::Exact { d: *d, points: perm.iter().map(|&i| points[i].clone()).collect() }
            }
            PointSet::Float { d, points } => {
                PointSet::Float { d: *d, points: perm.iter().map(|&i| points[i].clone()).collect() }
            }
        }
    }
}

/// Some pair of points whose coordinates all agree within `tau`.
pub(crate) fn find_close_pair(points: &[Vec<f64>], tau: f64) -> Option<(usize, usize)> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]));
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            if points[j][0] - points[i][0] > tau {
                break;
            }
            if points[i].iter().zip(&points[j]).all(|(a, b)| (a - b).abs() <= tau) {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct PointSetJson {
    d: usize,
    mode: Mode,
    points: Vec<Vec<serde_json::Value>>,
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let points = match self {
            PointSet::Exact { points, .. } => points
                .iter()
                .map(|p| p.entries().iter().map(|x| serde_json::Value::String(x.to_string())).collect())
                .collect(),
            PointSet::Float { points, .. } => points
                .iter()
                .map(|p| p.iter().map(|&x| serde_json::json!(x)).collect())
                .collect(),
        };
        PointSetJson { d: self.dim(), mode: self.mode(), points }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PointSetJson::deserialize(de)?;
        match raw.mode {
            Mode::Exact => {
                let pts = raw
                    .points
                    .into_iter()
                    .map(|p| {
                        let v: Vec<Rational> = p
                            .into_iter()
                            .map(serde_json::from_value)
                            .collect::<Result<_, _>>()
                            .map_err(D::Error::custom)?;
                        QVector::new(v).map_err(D::Error::custom)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PointSet::exact(raw.d, pts).map_err(D::Error::custom)
            }
            Mode::Float => {
                let pts = raw
                    .points
                    .into_iter()
                    .map(|p| {
                        p.into_iter()
                            .map(|x| match x {
                                serde_json::Value::String(s) => s
                                    .parse::<Rational>()
                                    .map(|r| r.to_f64())
                                    .map_err(D::Error::custom),
                                other => serde_json::from_value::<f64>(other).map_err(D::Error::custom),
                            })
                            .collect::<Result<Vec<f64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PointSet::float(raw.d, pts, TAU).map_err(D::Error::custom)
            }
        }
    }
}
