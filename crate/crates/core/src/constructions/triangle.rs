use rand::Rng;

use super::{
    factor, rng_for, Block, ConstructionError, ConstructionResult, FactorKind, MinkowskiFactor, Sum, Vector,
    RETRY_BUDGET,
};
use crate::distgraph::{PointSet, TAU};
use crate::norms::{boundary_point, Norm};

fn boundary_at(norm: &Norm, angle: f64) -> Result<Vec<f64>, ConstructionError> {
    Ok(boundary_point(norm, &[angle.cos(), angle.sin()])?)
}

fn require_planar_strict(norm: &Norm) -> Result<(), ConstructionError> {
    if norm.dim() != 2 {
        return Err(ConstructionError::Unsupported(format!("planar construction in dimension {}", norm.dim())));
    }
    if !norm.is_strictly_convex() {
        return Err(ConstructionError::NotStrictlyConvex);
    }
    Ok(())
}

/// Point `y` on the unit circle with `||y - x|| = 1`, for a unit vector `x`.
/// Bisection over the angle `t` in `[0, pi]` measured from `x`, where
/// `g(t) = ||y(t) - x|| - 1` goes from -1 to +1.
pub fn unit_circle_partner(norm: &Norm, x: &[f64]) -> Result<Vec<f64>, ConstructionError> {
    require_planar_strict(norm)?;
    let nx = norm.eval_f64(x)?;
    if (nx - 1.0).abs() > TAU {
        return Err(ConstructionError::InvalidParameter(format!("x must be a unit vector, has norm {nx}")));
    }
    let phi = x[1].atan2(x[0]);
    let g = |t: f64| -> Result<f64, ConstructionError> {
        let y = boundary_at(norm, phi + t)?;
        Ok(norm.eval_f64(&[y[0] - x[0], y[1] - x[1]])? - 1.0)
    };
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    if !(g(lo)? < 0.0 && g(hi)? > 0.0) {
        return Err(ConstructionError::NotStrictlyConvex);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if g(lo)?.abs() <= g(hi)?.abs() { lo } else { hi };
    boundary_at(norm, phi + t)
}

fn triangle_factors(
    norm: &Norm,
    k: u32,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(Sum, Vec<MinkowskiFactor>), ConstructionError> {
    let mut sum = Sum::origin(false, 2);
    let mut factors = Vec::new();
    for i in 0..k {
        let mut next = None;
        for _ in 0..RETRY_BUDGET {
            let x = boundary_at(norm, rng.gen_range(0.0..std::f64::consts::TAU))?;
            let y = unit_circle_partner(norm, &x)?;
            let summands = [Vector::Float(vec![0.0, 0.0]), Vector::Float(x), Vector::Float(y)];
            if let Some(s) = sum.extend(&summands) {
                next = Some((s, summands));
                break;
            }
        }
        let (s, summands) =
            next.ok_or_else(|| ConstructionError::RetryBudgetExhausted(format!("triangle factor {}", i + 1)))?;
        factors.push(factor(FactorKind::ZeroXYTriangle, &summands, 2)?);
        sum = s;
    }
    Ok((sum, factors))
}

/// `S_1 + ... + S_k` with `S_i = {0, x_i, y_i}` unit triangles: `3^k` points
/// and at least `k 3^k` unit distances.
pub fn triangle_power(norm: &Norm, k: u32, seed: u64) -> Result<ConstructionResult, ConstructionError> {
    require_planar_strict(norm)?;
    if k == 0 || k > 14 {
        return Err(ConstructionError::InvalidParameter(format!("k must be in 1..=14, got {k}")));
    }
    let (sum, factors) = triangle_factors(norm, k, &mut rng_for(seed))?;
    Ok(ConstructionResult {
        points: sum.into_pointset(2)?,
        promised_edges: k as u64 * 3u64.pow(k),
        factors,
        blocks: Vec::new(),
        seed,
    })
}

/// `n` points with at least `sum_i a_i i 3^i` unit distances, where `a_i` are
/// the base-3 digits of `n`: `a_i` far-apart translated copies of a
/// `3^i`-point triangle power.
pub fn compose_base3(norm: &Norm, n: u64, seed: u64) -> Result<ConstructionResult, ConstructionError> {
    require_planar_strict(norm)?;
    if n == 0 || n > 3u64.pow(14) {
        return Err(ConstructionError::InvalidParameter(format!("n must be in 1..=3^14, got {n}")));
    }
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push(m % 3);
        m /= 3;
    }
    let mut rng = rng_for(seed);
    let mut blocks = Vec::new();
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut promised = 0u64;
    let mut cursor = 0.0f64;
    // horizontal gaps above twice the largest Euclidean radius of the unit
    // ball keep distinct blocks more than a unit apart
    let radius = crate::norms::sample_boundary(norm, 256)?
        .iter()
        .map(|s| crate::norms::euclid_len(&s.point))
        .fold(0.0, f64::max);
    let gap = 2.0 * radius + 1.0;
    // exponents from high to low
    for i in (0..digits.len() as u32).rev() {
        let a = digits[i as usize];
        if a == 0 {
            continue;
        }
        let (sum, factors) = triangle_factors(norm, i, &mut rng)?;
        let Sum::Float(base) = sum else { unreachable!("float mode") };
        let (lo, hi) = base.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[0]), h.max(p[0])));
        for _ in 0..a {
            let shift = vec![cursor - lo + gap * rng.gen_range(1.0..2.0), rng.gen_range(-1.0..1.0)];
            cursor = shift[0] + hi;
            points.extend(base.iter().map(|p| vec![p[0] + shift[0], p[1] + shift[1]]));
            blocks.push(Block { exponent: i, translation: shift, factors: factors.clone() });
            promised += i as u64 * 3u64.pow(i);
        }
    }
    Ok(ConstructionResult {
        points: PointSet::float(2, points, TAU)?,
        promised_edges: promised,
        factors: Vec::new(),
        blocks,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgraph::build_udg;
    use crate::norms::{PolytopeNorm, SmoothNorm};

    fn residuals(norm: &Norm, x: &[f64]) -> (f64, f64) {
        let y = unit_circle_partner(norm, x).unwrap();
        (
            (norm.eval_f64(&y).unwrap() - 1.0).abs(),
            (norm.eval_f64(&[y[0] - x[0], y[1] - x[1]]).unwrap() - 1.0).abs(),
        )
    }

    #[test]
    fn euclidean_partner_is_equilateral() {
        let y = unit_circle_partner(&Norm::euclidean(2), &[1.0, 0.0]).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-12 && (y[1] - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn partner_residuals() {
        let l3 = Norm::Smooth(SmoothNorm::lp(2, 3.0).unwrap());
        let (a, b) = residuals(&l3, &[1.0, 0.0]);
        assert!(a < 1e-9 && b < 1e-9);
        let st = Norm::Smooth(SmoothNorm::strictified(PolytopeNorm::linf(2), 0.05).unwrap());
        let x = boundary_point(&st, &[0.3, 0.8]).unwrap();
        let (a, b) = residuals(&st, &x);
        assert!(a < 1e-9 && b < 1e-9);
        assert!(matches!(
            unit_circle_partner(&Norm::Polytope(PolytopeNorm::linf(2)), &[1.0, 0.0]),
            Err(ConstructionError::NotStrictlyConvex)
        ));
    }

    #[test]
    fn triangle_power_counts() {
        let e = Norm::euclidean(2);
        let r = triangle_power(&e, 1, 0).unwrap();
        assert_eq!(r.points.len(), 3);
        assert_eq!(build_udg(&r.points, &e, TAU).unwrap().num_edges(), 3);
        let r = triangle_power(&e, 2, 1).unwrap();
        assert!(build_udg(&r.points, &e, TAU).unwrap().num_edges() >= 18);
        let r = triangle_power(&e, 5, 2).unwrap();
        assert_eq!(r.points.len(), 243);
        assert!(build_udg(&r.points, &e, TAU).unwrap().num_edges() >= 1215);
    }

    #[test]
    fn base3_counts() {
        let e = Norm::euclidean(2);
        for (n, want) in [(3u64, 3usize), (10, 18), (27, 81), (1, 0)] {
            let r = compose_base3(&e, n, 4).unwrap();
            assert_eq!(r.points.len() as u64, n);
            assert_eq!(r.promised_edges as usize, want);
            assert!(build_udg(&r.points, &e, TAU).unwrap().num_edges() >= want);
        }
    }
}
