use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{GraphError, PointSet};
use crate::norms::Norm;
use crate::qlinalg::{QVector, Rational};

/// Canonical direction of an edge: `(p - q) / ||p - q||` with its first
/// nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Direction {
    Exact(QVector),
    Float(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionClass {
    pub direction: Direction,
    /// Indices into the edge list.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitDistanceGraph {
    pub n: usize,
    /// Pairs `(x, y)` with `x < y`, in lexicographic order.
    pub edges: Vec<(usize, usize)>,
    /// `| ||p_x - p_y|| - 1 |` per edge; identically zero in exact mode.
    pub residuals: Vec<f64>,
    pub direction_classes: Vec<DirectionClass>,
}

impl UnitDistanceGraph {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

const DIRECTION_TOL: f64 = 1e-7;

/// All pairs at norm distance exactly 1 (exact mode) or within `tau` of 1
/// (float mode), grouped by direction.
pub fn build_udg(ps: &PointSet, norm: &Norm, tau: f64) -> Result<UnitDistanceGraph, GraphError> {
    if ps.dim() != norm.dim() {
        return Err(GraphError::DimensionMismatch { expected: norm.dim(), got: ps.dim() });
    }
    let n = ps.len();
    match ps {
        PointSet::Exact { points, .. } => {
            let Norm::Polytope(pn) = norm else {
                return Err(GraphError::ModeMismatch);
            };
            let proj: Vec<Vec<Rational>> = points.iter().map(|p| pn.projections(p)).collect();
            let projf: Vec<Vec<f64>> = proj.iter().map(|v| v.iter().map(Rational::to_f64).collect()).collect();
            let scale = projf.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
            // float rounding of the projections is far below this window
            let window = 1e-9 * (1.0 + 2.0 * scale);
            let one = Rational::one();
            let edges: Vec<(usize, usize)> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let (proj, projf, one) = (&proj, &projf, &one);
                    (i + 1..n).filter_map(move |j| {
                        let f = projf[i].iter().zip(&projf[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                        if (f - 1.0).abs() > window {
                            return None;
                        }
                        let e = proj[i].iter().zip(&proj[j]).map(|(a, b)| (a - b).abs()).max().expect("facets");
                        (&e == one).then_some((i, j))
                    })
                })
                .collect();
            let residuals = vec![0.0; edges.len()];
            let mut classes: Vec<DirectionClass> = Vec::new();
            let mut index: HashMap<QVector, usize> = HashMap::new();
            for (k, &(i, j)) in edges.iter().enumerate() {
                let dir = (&points[j] - &points[i]).sign_normalized();
                let c = *index.entry(dir.clone()).or_insert_with(|| {
                    classes.push(DirectionClass { direction: Direction::Exact(dir), edges: Vec::new() });
                    classes.len() - 1
                });
                classes[c].edges.push(k);
            }
            Ok(UnitDistanceGraph { n, edges, residuals, direction_classes: classes })
        }
        PointSet::Float { points, .. } => {
            let found: Vec<((usize, usize), f64)> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let diff = vec![0.0; points[i].len()];
                    (i + 1..n).scan(diff, move |diff, j| {
                        for (k, x) in diff.iter_mut().enumerate() {
                            *x = points[j][k] - points[i][k];
                        }
                        let r = norm.eval_f64(diff).expect("dimension checked");
                        Some(((r - 1.0).abs() <= tau).then_some(((i, j), (r - 1.0).abs())))
                    })
                    .flatten()
                })
                .collect();
            let (edges, residuals): (Vec<_>, Vec<_>) = found.into_iter().unzip();
            let mut classes: Vec<DirectionClass> = Vec::new();
            let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
            for (k, &(i, j)) in edges.iter().enumerate() {
                let diff: Vec<f64> = points[j].iter().zip(&points[i]).map(|(a, b)| a - b).collect();
                let r = norm.eval_f64(&diff)?;
                let mut dir: Vec<f64> = diff.iter().map(|x| x / r).collect();
                if dir.iter().find(|x| x.abs() > DIRECTION_TOL).is_some_and(|x| *x < 0.0) {
                    dir.iter_mut().for_each(|x| *x = -*x);
                }
                let key: Vec<i64> = dir.iter().map(|x| (x / (10.0 * DIRECTION_TOL)).round() as i64).collect();
                let c = match index.get(&key) {
                    Some(&c) => c,
                    None => {
                        let near = classes.iter().position(|cl| match &cl.direction {
                            Direction::Float(v) => v.iter().zip(&dir).all(|(a, b)| (a - b).abs() <= DIRECTION_TOL),
                            Direction::Exact(_) => false,
                        });
                        let c = near.unwrap_or_else(|| {
                            classes.push(DirectionClass { direction: Direction::Float(dir), edges: Vec::new() });
                            classes.len() - 1
                        });
                        index.insert(key, c);
                        c
                    }
                };
                classes[c].edges.push(k);
            }
            Ok(UnitDistanceGraph { n, edges, residuals, direction_classes: classes })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgraph::TAU;
    use crate::norms::PolytopeNorm;

    fn exact(pts: &[&[i64]]) -> PointSet {
        PointSet::exact(pts[0].len(), pts.iter().map(|p| QVector::from_ints(p)).collect()).unwrap()
    }

    #[test]
    fn unit_square_euclidean() {
        let ps = PointSet::float(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]], TAU).unwrap();
        let g = build_udg(&ps, &Norm::euclidean(2), TAU).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.direction_classes.len(), 2);
    }

    #[test]
    fn single_edge_linf() {
        let ps = exact(&[&[0, 0], &[1, 0]]);
        let g = build_udg(&ps, &Norm::Polytope(PolytopeNorm::linf(2)), TAU).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.direction_classes.len(), 1);
    }

    #[test]
    fn cube_vertices_under_linf() {
        let mut pts = Vec::new();
        for m in 0..8i64 {
            pts.push(QVector::from_ints(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]));
        }
        // every pair of distinct cube vertices is at sup-distance 1
        let g = build_udg(&PointSet::exact(3, pts).unwrap(), &Norm::Polytope(PolytopeNorm::linf(3)), TAU).unwrap();
        assert_eq!(g.num_edges(), 28);
    }

    #[test]
    fn mode_mismatch() {
        let ps = exact(&[&[0, 0], &[1, 0]]);
        assert!(matches!(build_udg(&ps, &Norm::euclidean(2), TAU), Err(GraphError::ModeMismatch)));
    }
}
