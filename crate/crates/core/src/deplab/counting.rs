use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::DeplabError;
use crate::qlinalg::QVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

fn xlogx(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// For `n₁ ≥ … ≥ n_ℓ ≥ 1` with sum `n`, compares
/// `n₁ − ½·Σ nᵢ log₂ nᵢ` against `n − ½·n log₂ n`.
pub fn entropy_check(sizes: &[u64]) -> Result<EntropyCheck, DeplabError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(DeplabError::InvalidParameter("sizes must be positive and nonempty".into()));
    }
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(DeplabError::Unsorted);
    }
    let n: f64 = sizes.iter().map(|&s| s as f64).sum();
    let lhs = sizes[0] as f64 - 0.5 * sizes.iter().map(|&s| xlogx(s as f64)).sum::<f64>();
    let rhs = n - 0.5 * xlogx(n);
    Ok(EntropyCheck { lhs, rhs, ok: lhs >= rhs - 1e-12 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UngarReport {
    pub n: usize,
    /// Number of distinct lines through the origin spanned by differences.
    pub count: usize,
    /// All points on one line (including n ≤ 2).
    pub collinear: bool,
}

/// Counts the distinct directions `p_x − p_y` up to scaling.
pub fn ungar_directions(points: &[QVector]) -> Result<UngarReport, DeplabError> {
    let mut seen: HashMap<&QVector, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if p.dim() != points[0].dim() {
            return Err(DeplabError::DimensionMismatch { expected: points[0].dim(), got: p.dim() });
        }
        if let Some(j) = seen.insert(p, i) {
            return Err(DeplabError::DuplicatePoint(j, i));
        }
    }
    let mut lines = HashSet::new();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            lines.insert((q - p).projective_key());
        }
    }
    Ok(UngarReport { n: points.len(), count: lines.len(), collinear: lines.len() <= 1 })
}
