use std::fmt::Write;

use serde::Serialize;

use super::{GraphError, PointSet, UnitDistanceGraph};
use crate::norms::Norm;
use crate::qlinalg::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DistanceValue {
    Exact(Rational),
    Float(f64),
}

impl std::fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistanceValue::Exact(r) => write!(f, "{r}"),
            DistanceValue::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Sorted distinct pairwise distances with multiplicities summing to C(n, 2).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceSpectrum {
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: DistanceValue,
    pub multiplicity: u64,
}

impl DistanceSpectrum {
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("distance,multiplicity\n");
        for e in &self.entries {
            writeln!(s, "{},{}", e.value, e.multiplicity).expect("write to string");
        }
        s
    }
}

/// Distinct pairwise distances. Float distances are clustered: sorted values
/// start a new cluster whenever the gap to the previous value exceeds `tau`;
/// each cluster is reported by its mean.
pub fn distance_spectrum(ps: &PointSet, norm: &Norm, tau: f64) -> Result<DistanceSpectrum, GraphError> {
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
            let mut all: Vec<Rational> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    all.push(proj[i].iter().zip(&proj[j]).map(|(a, b)| (a - b).abs()).max().expect("facets"));
                }
            }
            all.sort();
            let mut entries: Vec<SpectrumEntry> = Vec::new();
            for v in all {
                match entries.last_mut() {
                    Some(SpectrumEntry { value: DistanceValue::Exact(w), multiplicity }) if *w == v => {
                        *multiplicity += 1
                    }
                    _ => entries.push(SpectrumEntry { value: DistanceValue::Exact(v), multiplicity: 1 }),
                }
            }
            Ok(DistanceSpectrum { entries })
        }
        PointSet::Float { points, .. } => {
            let mut all = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    let diff: Vec<f64> = points[i].iter().zip(&points[j]).map(|(a, b)| a - b).collect();
                    all.push(norm.eval_f64(&diff)?);
                }
            }
            all.sort_by(f64::total_cmp);
            let mut clusters: Vec<Vec<f64>> = Vec::new();
            for v in all {
                match clusters.last_mut() {
                    Some(c) if v - c.last().expect("nonempty") <= tau => c.push(v),
                    _ => clusters.push(vec![v]),
                }
            }
            let entries = clusters
                .into_iter()
                .map(|c| SpectrumEntry {
                    value: DistanceValue::Float(c.iter().sum::<f64>() / c.len() as f64),
                    multiplicity: c.len() as u64,
                })
                .collect();
            Ok(DistanceSpectrum { entries })
        }
    }
}

/// Edge count against the `(d/2) n log2 n` ceiling, and the distinct-distance
/// count against the reference lines `n - 1` and `n - d n^(3/4)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeilingReport {
    pub n: usize,
    pub d: usize,
    pub edges: usize,
    pub ceiling: f64,
    pub ceiling_ok: bool,
    pub distinct: usize,
    pub n_minus_one: usize,
    pub distinct_reference: f64,
}

pub fn unit_distance_ceiling(n: usize, d: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        d as f64 / 2.0 * n as f64 * (n as f64).log2()
    }
}

pub fn check_ceilings(g: &UnitDistanceGraph, spectrum: &DistanceSpectrum, d: usize) -> CeilingReport {
    let n = g.n;
    let ceiling = unit_distance_ceiling(n, d);
    CeilingReport {
        n,
        d,
        edges: g.num_edges(),
        ceiling,
        ceiling_ok: g.num_edges() as f64 <= ceiling + 1e-9,
        distinct: spectrum.distinct(),
        n_minus_one: n.saturating_sub(1),
        distinct_reference: n as f64 - d as f64 * (n as f64).powf(0.75),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgraph::{build_udg, TAU};
    use crate::norms::PolytopeNorm;
    use crate::qlinalg::QVector;

    #[test]
    fn arithmetic_progression() {
        let pts = (0..5).map(|i| QVector::from_ints(&[i, 2 * i])).collect();
        let ps = PointSet::exact(2, pts).unwrap();
        let s = distance_spectrum(&ps, &Norm::Polytope(PolytopeNorm::linf(2)), TAU).unwrap();
        assert_eq!(s.distinct(), 4);
        assert_eq!(s.total(), 10);
        assert_eq!(s.to_csv().lines().nth(1), Some("2,4"));
    }

    #[test]
    fn single_point() {
        let ps = PointSet::exact(2, vec![QVector::from_ints(&[0, 0])]).unwrap();
        let norm = Norm::Polytope(PolytopeNorm::linf(2));
        let s = distance_spectrum(&ps, &norm, TAU).unwrap();
        assert_eq!(s.distinct(), 0);
        let g = build_udg(&ps, &norm, TAU).unwrap();
        let r = check_ceilings(&g, &s, 2);
        assert_eq!(r.ceiling, 0.0);
        assert!(r.ceiling_ok);
    }

    #[test]
    fn generic_rational_points() {
        let pts = vec![
            QVector::new(vec![Rational::new(0, 1), Rational::new(0, 1)]).unwrap(),
            QVector::new(vec![Rational::new(1, 3), Rational::new(1, 7)]).unwrap(),
            QVector::new(vec![Rational::new(5, 11), Rational::new(-2, 13)]).unwrap(),
            QVector::new(vec![Rational::new(-3, 17), Rational::new(9, 19)]).unwrap(),
        ];
        let ps = PointSet::exact(2, pts).unwrap();
        let s = distance_spectrum(&ps, &Norm::Polytope(PolytopeNorm::linf(2)), TAU).unwrap();
        assert_eq!(s.distinct(), 6);
    }

    #[test]
    fn float_clustering() {
        let ps = PointSet::float(1, vec![vec![0.0], vec![1.0], vec![2.0 + 1e-12], vec![3.5]], TAU).unwrap();
        let s = distance_spectrum(&ps, &Norm::euclidean(1), TAU).unwrap();
        // 1 (x2), 1.5, 2, 2.5, 3.5
        assert_eq!(s.distinct(), 5);
        assert_eq!(s.entries[0].multiplicity, 2);
    }

    #[test]
    fn ceiling_examples() {
        assert_eq!(unit_distance_ceiling(8, 2), 24.0);
        assert_eq!(unit_distance_ceiling(4, 2), 8.0);
        assert_eq!(unit_distance_ceiling(1, 3), 0.0);
    }
}
