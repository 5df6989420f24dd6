use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{matroid_partition, span_audit_with, AuditMethod, DeplabError};
use crate::distgraph::PointSet;
use crate::norms::PolytopeNorm;
use crate::qlinalg::{QVector, Rational};

/// Proper coloring of the odd-distance graph with at most `2^d` colors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OddColoring {
    pub colors: Vec<u32>,
    pub num_colors: usize,
    pub edges: Vec<(usize, usize)>,
    /// Distinct edge directions (first nonzero coordinate 1).
    pub directions: Vec<QVector>,
    /// Direction indices of each independent class.
    pub classes: Vec<Vec<usize>>,
}

fn is_odd_integer(r: &Rational) -> bool {
    r.is_integer() && r.numer().bit(0)
}

/// Colors points so that no two at odd-integer distance share a color.
///
/// The edge directions are split into `d` independent classes; within one
/// class every cycle uses each direction an even number of times, so the
/// class subgraph is bipartite and contributes one parity bit per vertex.
pub fn odd_distance_coloring(ps: &PointSet, norm: &PolytopeNorm, d: usize) -> Result<OddColoring, DeplabError> {
    let points = ps.exact_points().ok_or(DeplabError::NotExact)?;
    if norm.dim() != ps.dim() {
        return Err(DeplabError::DimensionMismatch { expected: norm.dim(), got: ps.dim() });
    }
    if d == 0 || d > 31 {
        return Err(DeplabError::InvalidParameter("d must be in 1..=31".into()));
    }
    let n = points.len();
    let mut edges = Vec::new();
    let mut edge_dir = Vec::new();
    let mut directions: Vec<QVector> = Vec::new();
    let mut dir_index: HashMap<QVector, usize> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let diff = &points[j] - &points[i];
            if !is_odd_integer(&norm.eval_exact(&diff)?) {
                continue;
            }
            let key = diff.projective_key();
            let next = directions.len();
            let idx = *dir_index.entry(key.clone()).or_insert(next);
            if idx == next {
                directions.push(key);
            }
            edges.push((i, j));
            edge_dir.push(idx);
        }
    }
    let report = span_audit_with(&directions, d, 0, AuditMethod::Partition)?;
    if !report.is_clean() {
        return Err(DeplabError::AuditViolated(Box::new(report)));
    }
    let partition = matroid_partition(&directions, d, 0)?;
    let mut class_of = vec![0usize; directions.len()];
    for (c, members) in partition.classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    let mut adj: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; d];
    for (&(i, j), &dir) in edges.iter().zip(&edge_dir) {
        let c = class_of[dir];
        adj[c][i].push(j);
        adj[c][j].push(i);
    }
    let mut colors = vec![0u32; n];
    for (c, graph) in adj.iter().enumerate() {
        let mut side: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let s = side[v].expect("visited");
                for &w in &graph[v] {
                    match side[w] {
                        None => {
                            side[w] = Some(!s);
                            queue.push_back(w);
                        }
                        Some(t) if t == s => {
                            return Err(DeplabError::Certificate(format!("class {c} subgraph has an odd cycle")));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        for (v, s) in side.iter().enumerate() {
            if s == &Some(true) {
                colors[v] |= 1 << c;
            }
        }
    }
    if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| colors[i] == colors[j]) {
        return Err(DeplabError::Certificate(format!("points {i} and {j} share color {}", colors[i])));
    }
    let mut used = colors.clone();
    used.sort_unstable();
    used.dedup();
    Ok(OddColoring { colors, num_colors: used.len(), edges, directions, classes: partition.classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(xs: &[[i64; 2]]) -> PointSet {
        PointSet::exact(2, xs.iter().map(|v| QVector::from_ints(v)).collect()).unwrap()
    }

    #[test]
    fn unit_square_under_max_norm() {
        let c = odd_distance_coloring(&ps(&[[0, 0], [1, 0], [0, 1], [1, 1]]), &PolytopeNorm::linf(2), 2).unwrap();
        assert_eq!(c.edges.len(), 6);
        assert_eq!(c.directions.len(), 4);
        assert_eq!(c.classes, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.num_colors, 4);
    }

    #[test]
    fn single_edge_two_colors() {
        let c = odd_distance_coloring(&ps(&[[0, 0], [3, 1]]), &PolytopeNorm::linf(2), 2).unwrap();
        assert_eq!(c.num_colors, 2);
    }

    #[test]
    fn too_many_directions_reported() {
        let pts = ps(&[[0, 0], [1, 0], [0, 1], [1, 1], [3, 1]]);
        let err = odd_distance_coloring(&pts, &PolytopeNorm::linf(2), 2).unwrap_err();
        assert!(matches!(err, DeplabError::AuditViolated(_)));
    }
}
