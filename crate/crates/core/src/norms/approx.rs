use num_bigint::BigInt;
use num_integer::Integer;

use super::hausdorff::hausdorff_to_norm;
use super::hull::{hull2, hull3, merge_coplanar, to_grid};
use super::{boundary_point, epsilon_net, Facet, Norm, NormError, PolytopeNorm, PolytopeShape, SmoothNorm};
use crate::qlinalg::{QVector, Rational};

/// A point on the unit sphere together with the direction it was cast from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySample {
    pub point: Vec<f64>,
    pub direction: Vec<f64>,
}

/// `count` boundary points: equally spaced angles in the plane, a Fibonacci
/// lattice of directions in space.
pub fn sample_boundary(norm: &Norm, count: usize) -> Result<Vec<BoundarySample>, NormError> {
    let d = norm.dim();
    let dirs: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / count as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let ph = golden * i as f64;
                    vec![r * ph.cos(), r * ph.sin(), z]
                })
                .collect()
        }
        _ => return Err(NormError::Unsupported(format!("boundary sampling in dimension {d}"))),
    };
    dirs.into_iter()
        .map(|direction| Ok(BoundarySample { point: boundary_point(norm, &direction)?, direction }))
        .collect()
}

/// `||x||' = ||x|| + eps |x|_2` with `eps = mu / c^2`, `c` the largest
/// Euclidean norm on the unit ball. The new ball lies inside the old one
/// within Hausdorff distance `mu`.
pub fn strictify(base: &PolytopeNorm, mu: f64) -> Result<SmoothNorm, NormError> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(NormError::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let c = PolytopeShape::new(base)?.circumradius();
    SmoothNorm::strictified(base.clone(), mu / (c * c))
}

/// Symmetric polytope norm whose unit ball is the hull of `points` and their
/// negatives. Points are first rounded to a dyadic grid so the hull and the
/// facet data are exact.
pub fn polytope_from_points(points: &[Vec<f64>], d: usize) -> Result<PolytopeNorm, NormError> {
    let mut sym: Vec<Vec<f64>> = points.to_vec();
    sym.extend(points.iter().map(|p| p.iter().map(|x| -x).collect::<Vec<f64>>()));
    let (grid, scale) = to_grid(&sym);
    let scale = BigInt::from(scale as u64);
    let mut facets: Vec<Facet> = Vec::new();
    let mut push = |normal: Vec<i128>, offset: i128| -> Result<(), NormError> {
        if offset <= 0 {
            return Err(NormError::Degenerate("origin is not interior to the hull".into()));
        }
        let g = normal.iter().fold(0i128, |g, x| g.gcd(x));
        let normal = QVector::new(
            normal.iter().map(|x| Rational::from_bigints(BigInt::from(x / g), BigInt::from(1))).collect(),
        )?;
        let f = Facet::new(
            normal.sign_normalized(),
            Rational::from_bigints(BigInt::from(offset / g), scale.clone()),
        );
        if !facets.contains(&f) {
            facets.push(f);
        }
        Ok(())
    };
    match d {
        2 => {
            let h = hull2(&grid);
            if h.len() < 3 {
                return Err(NormError::Degenerate("points do not span the plane".into()));
            }
            for j in 0..h.len() {
                let a = &grid[h[j]];
                let b = &grid[h[(j + 1) % h.len()]];
                let n = vec![(b[1] - a[1]) as i128, (a[0] - b[0]) as i128];
                let off = n[0] * a[0] as i128 + n[1] * a[1] as i128;
                push(n, off)?;
            }
        }
        3 => {
            let tris = hull3(&grid)?;
            for f in merge_coplanar(&grid, &tris) {
                push(f.normal.to_vec(), f.offset)?;
            }
        }
        _ => return Err(NormError::Unsupported(format!("polytope approximation in dimension {d}"))),
    }
    PolytopeNorm::new(d, facets)
}

/// Result of [`approximate_polytope`] with the measured quality.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Approximation {
    pub polytope: PolytopeNorm,
    pub max_facet_diameter: f64,
    pub hausdorff: f64,
    pub net_eps: f64,
    pub samples: usize,
    pub attempts: usize,
}

const APPROX_ATTEMPTS: usize = 8;

/// Symmetric polytope with every facet of diameter below `mu` and unit ball
/// within Hausdorff distance `mu` of the unit ball of `norm`.
///
/// Boundary samples are thinned to an `eps`-net (`eps = mu / 4` at first),
/// symmetrized and hulled. If the measured facet diameter or Hausdorff
/// distance is not below `mu`, `eps` is halved and the sampling doubled.
pub fn approximate_polytope(norm: &Norm, mu: f64, d: usize) -> Result<Approximation, NormError> {
    if !norm.is_strictly_convex() {
        return Err(NormError::NotStrictlyConvex);
    }
    super::check_dim(norm.dim(), d)?;
    if d != 2 && d != 3 {
        return Err(NormError::Unsupported(format!("polytope approximation in dimension {d}")));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(NormError::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let mut samples = if d == 2 { 4096 } else { 8192 };
    let mut eps = mu / 4.0;
    let mut last = (f64::NAN, f64::NAN);
    for attempt in 1..=APPROX_ATTEMPTS {
        let pts: Vec<Vec<f64>> = sample_boundary(norm, samples)?.into_iter().map(|s| s.point).collect();
        let net = epsilon_net(&pts, eps)?;
        let polytope = polytope_from_points(&net, d)?;
        let shape = PolytopeShape::new(&polytope)?;
        let diam = shape.max_facet_diameter();
        let check_samples = if d == 2 { 4 * samples } else { samples };
        let h = hausdorff_to_norm(&polytope, norm, check_samples)?;
        if diam < mu && h < mu {
            return Ok(Approximation {
                polytope,
                max_facet_diameter: diam,
                hausdorff: h,
                net_eps: eps,
                samples,
                attempts: attempt,
            });
        }
        last = (diam, h);
        eps /= 2.0;
        samples *= 2;
    }
    Err(NormError::ApproximationFailed { attempts: APPROX_ATTEMPTS, diameter: last.0, hausdorff: last.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictify_square() {
        let s = strictify(&PolytopeNorm::linf(2), 0.1).unwrap();
        let SmoothNorm::Strictified { epsilon, .. } = &s else { panic!() };
        assert!((epsilon - 0.05).abs() < 1e-12);
        let b = boundary_point(&Norm::Smooth(s.clone()), &[1.0, 0.0]).unwrap();
        assert!((b[0] - 1.0 / 1.05).abs() < 1e-12 && b[1] == 0.0);
        assert!(strictify(&PolytopeNorm::linf(2), 0.0).is_err());
    }

    #[test]
    fn disc_approximation() {
        let a = approximate_polytope(&Norm::euclidean(2), 0.5, 2).unwrap();
        assert!(a.max_facet_diameter < 0.5 && a.hausdorff < 0.5);
        assert!(approximate_polytope(&Norm::Polytope(PolytopeNorm::linf(2)), 0.5, 2).is_err());
    }

    #[test]
    fn sphere_approximation() {
        let a = approximate_polytope(&Norm::euclidean(3), 0.5, 3).unwrap();
        assert!(a.max_facet_diameter < 0.5 && a.hausdorff < 0.5);
    }

    #[test]
    fn hull_of_square_points() {
        let p = polytope_from_points(&[vec![1.0, 1.0], vec![1.0, -1.0], vec![0.5, 0.0]], 2).unwrap();
        assert_eq!(p.num_facets(), 2);
        let x = QVector::from_ints(&[3, 4]);
        assert_eq!(p.eval_exact(&x).unwrap(), Rational::from_integer(4));
    }
}
