use super::approx::sample_boundary;
use super::{check_dim, dist, Norm, NormError, PolytopeNorm, PolytopeShape};

/// Euclidean Hausdorff distance between two polytope unit balls (d <= 3).
/// Distance to a convex set is convex, so the supremum over a ball is
/// attained at one of its vertices.
pub fn hausdorff_distance(p: &PolytopeNorm, q: &PolytopeNorm) -> Result<f64, NormError> {
    check_dim(p.dim(), q.dim())?;
    let sp = PolytopeShape::new(p)?;
    let sq = PolytopeShape::new(q)?;
    Ok(shape_hausdorff(&sp, &sq))
}

pub(crate) fn shape_hausdorff(sp: &PolytopeShape, sq: &PolytopeShape) -> f64 {
    let a = sp.vertices().iter().map(|v| sq.distance(v)).fold(0.0, f64::max);
    let b = sq.vertices().iter().map(|v| sp.distance(v)).fold(0.0, f64::max);
    a.max(b)
}

/// Hausdorff distance between a polytope ball and the unit ball of any norm,
/// using `samples` boundary points of the latter. Exact on the polytope side;
/// the other side is resolved to the sample spacing.
pub fn hausdorff_to_norm(p: &PolytopeNorm, other: &Norm, samples: usize) -> Result<f64, NormError> {
    check_dim(p.dim(), other.dim())?;
    let sp = PolytopeShape::new(p)?;
    let bdry: Vec<Vec<f64>> = sample_boundary(other, samples)?.into_iter().map(|s| s.point).collect();
    let into_p = bdry.iter().map(|b| sp.distance(b)).fold(0.0, f64::max);
    let mut into_other = 0.0f64;
    for v in sp.vertices() {
        if other.eval_f64(v)? <= 1.0 {
            continue;
        }
        let m = bdry.iter().map(|b| dist(b, v)).fold(f64::INFINITY, f64::min);
        into_other = into_other.max(m);
    }
    Ok(into_p.max(into_other))
}

/// For `x` on the boundary of `P`, a point `y` on the boundary of `Q` with
/// `|x - y|_2 <= d_H(P, Q)`.
///
/// If `x` is outside `Q` its nearest point in `Q` works; if inside, the exit
/// point of the ray from `x` along an outward normal of a facet of `P`
/// through `x` does. The radial projection is also tried and the closer
/// candidate is returned.
pub fn boundary_witness(p: &PolytopeNorm, q: &PolytopeNorm, x: &[f64]) -> Result<Vec<f64>, NormError> {
    check_dim(p.dim(), q.dim())?;
    check_dim(p.dim(), x.len())?;
    let nx = p.eval_f64_unchecked(x);
    if (nx - 1.0).abs() > 1e-9 {
        return Err(NormError::NotOnBoundary(nx));
    }
    let qx = q.eval_f64_unchecked(x);
    if (qx - 1.0).abs() <= 1e-12 {
        return Ok(x.to_vec());
    }
    let mut candidates = vec![x.iter().map(|v| v / qx).collect::<Vec<f64>>()];
    if qx > 1.0 {
        candidates.push(PolytopeShape::new(q)?.closest_point(x).0);
    } else {
        // active facet of P at x
        let (i, s) = p
            .scaled_normals_f64()
            .iter()
            .map(|o| o.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("facets");
        let sign = s.signum();
        let o = &p.facets()[i].normal.to_f64();
        let len = super::euclid(o);
        let dir: Vec<f64> = o.iter().map(|v| sign * v / len).collect();
        // exit parameter from Q along x + t dir
        let mut t = f64::INFINITY;
        for w in q.scaled_normals_f64() {
            let wd: f64 = w.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let wx: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
            if wd.abs() > 0.0 {
                let lim = if wd > 0.0 { (1.0 - wx) / wd } else { (-1.0 - wx) / wd };
                t = t.min(lim);
            }
        }
        candidates.push(x.iter().zip(&dir).map(|(a, b)| a + t * b).collect());
    }
    Ok(candidates
        .into_iter()
        .min_by(|a, b| dist(a, x).total_cmp(&dist(b, x)))
        .expect("candidates"))
}
