use rand::Rng;

use super::{
    factor, random_direction, random_unit, rng_for, ConstructionError, ConstructionResult, FactorKind, Sum, Vector,
    RETRY_BUDGET,
};
use crate::norms::{euclid_len, Norm, SmoothNorm};

/// `m` seeded random points on the circle `{z : |z - c1| = |z - c2| = 1}` in
/// Euclidean 3-space.
pub fn sphere_intersection_samples(
    c1: &[f64],
    c2: &[f64],
    m: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>, ConstructionError> {
    circle_samples(c1, c2, m, &mut rng_for(seed))
}

fn circle_samples<R: Rng>(c1: &[f64], c2: &[f64], m: usize, rng: &mut R) -> Result<Vec<Vec<f64>>, ConstructionError> {
    if c1.len() != 3 || c2.len() != 3 {
        return Err(ConstructionError::Unsupported("sphere intersection needs 3D centres".into()));
    }
    let axis: Vec<f64> = c2.iter().zip(c1).map(|(a, b)| a - b).collect();
    let dist = euclid_len(&axis);
    if dist == 0.0 {
        return Err(ConstructionError::Degenerate("centres coincide".into()));
    }
    if dist >= 2.0 {
        return Err(ConstructionError::Degenerate(format!("centres at distance {dist} >= 2")));
    }
    let a: Vec<f64> = axis.iter().map(|x| x / dist).collect();
    let centre: Vec<f64> = c1.iter().zip(c2).map(|(x, y)| 0.5 * (x + y)).collect();
    let r = (1.0 - dist * dist / 4.0).sqrt();
    let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = {
        let v = cross(&a, &helper);
        let l = euclid_len(&v);
        v.iter().map(|x| x / l).collect::<Vec<f64>>()
    };
    let e2 = cross(&a, &e1);
    let mut angles: Vec<f64> = Vec::with_capacity(m);
    while angles.len() < m {
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        if angles.iter().all(|s| (s - t).abs() > 1e-9) {
            angles.push(t);
        }
    }
    Ok(angles
        .into_iter()
        .map(|t| (0..3).map(|i| centre[i] + r * (t.cos() * e1[i] + t.sin() * e2[i])).collect())
        .collect())
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `{x_1, ..., k x_1} + ... + {x_{d-1}, ..., k x_{d-1}} + {0, z_1} + ... + {0, z_m}`
/// where every `z_j - x_i` is a unit vector. Supported for `d = 2` (any
/// norm; exact for polytope norms) and `d = 3` (Euclidean).
pub fn bipartite_construction(
    norm: &Norm,
    d: usize,
    k: u32,
    m: u32,
    seed: u64,
) -> Result<ConstructionResult, ConstructionError> {
    if norm.dim() != d {
        return Err(ConstructionError::InvalidParameter(format!("norm has dimension {}, not {d}", norm.dim())));
    }
    if k < 2 || m < 1 {
        return Err(ConstructionError::InvalidParameter(format!("need k >= 2 and m >= 1, got k={k}, m={m}")));
    }
    if k.checked_pow(d as u32 - 1).and_then(|p| p.checked_mul(1u32.checked_shl(m)?)).is_none_or(|n| n > 1 << 22) {
        return Err(ConstructionError::InvalidParameter("construction too large".into()));
    }
    let mut rng = rng_for(seed);
    let exact = matches!(norm, Norm::Polytope(_));
    let mut sum = Sum::origin(exact, d);
    let mut factors = Vec::new();
    let chains = match d {
        2 => {
            let x = random_unit(norm, &mut rng)?;
            vec![x]
        }
        3 => {
            if !matches!(norm, Norm::Smooth(SmoothNorm::Euclidean { .. })) {
                return Err(ConstructionError::Unsupported("d = 3 requires the Euclidean norm".into()));
            }
            let mut xs = None;
            for _ in 0..RETRY_BUDGET {
                let x1 = random_direction(3, &mut rng);
                let x2 = random_direction(3, &mut rng);
                let gap = euclid_len(&x1.iter().zip(&x2).map(|(a, b)| a - b).collect::<Vec<f64>>());
                if gap > 0.1 && gap < 1.9 {
                    xs = Some(vec![Vector::Float(x1), Vector::Float(x2)]);
                    break;
                }
            }
            xs.ok_or_else(|| ConstructionError::RetryBudgetExhausted("chain directions".into()))?
        }
        _ => return Err(ConstructionError::Unsupported(format!("bipartite construction in dimension {d}"))),
    };
    for (i, x) in chains.iter().enumerate() {
        let summands: Vec<Vector> = (1..=k as i64).map(|s| x.scaled(s)).collect();
        sum = sum
            .extend(&summands)
            .ok_or_else(|| ConstructionError::RetryBudgetExhausted(format!("chain {}", i + 1)))?;
        factors.push(factor(FactorKind::ArithmeticChain, &summands, d)?);
    }
    for j in 0..m {
        let mut next = None;
        for _ in 0..RETRY_BUDGET {
            let z = match d {
                2 => random_unit(norm, &mut rng)?.add(&chains[0]),
                _ => {
                    let (Vector::Float(x1), Vector::Float(x2)) = (&chains[0], &chains[1]) else {
                        unreachable!("float chains")
                    };
                    Vector::Float(circle_samples(x1, x2, 1, &mut rng)?.remove(0))
                }
            };
            let summands = [z.scaled(0), z];
            if let Some(s) = sum.extend(&summands) {
                next = Some((s, summands));
                break;
            }
        }
        let (s, summands) =
            next.ok_or_else(|| ConstructionError::RetryBudgetExhausted(format!("z_{}", j + 1)))?;
        factors.push(factor(FactorKind::ZeroZPair, &summands, d)?);
        sum = s;
    }
    let (k, m, d) = (k as u64, m as u64, d as u64);
    Ok(ConstructionResult {
        points: sum.into_pointset(d as usize)?,
        promised_edges: (d - 1) * m * (k - 1) * k.pow(d as u32 - 2) * (1 << (m - 1)),
        factors,
        blocks: Vec::new(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgraph::{build_udg, TAU};
    use crate::norms::PolytopeNorm;

    #[test]
    fn circle_of_two_unit_spheres() {
        let s = sphere_intersection_samples(&[0.0; 3], &[1.0, 0.0, 0.0], 64, 1).unwrap();
        assert_eq!(s.len(), 64);
        for z in &s {
            assert!((z[0] - 0.5).abs() < 1e-12);
            assert!((euclid_len(z) - 1.0).abs() < 1e-12);
            assert!((euclid_len(&[z[0] - 1.0, z[1], z[2]]) - 1.0).abs() < 1e-12);
            assert!((euclid_len(&[z[1], z[2]]) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                assert!(euclid_len(&[s[i][0] - s[j][0], s[i][1] - s[j][1], s[i][2] - s[j][2]]) > 1e-9);
            }
        }
        assert!(sphere_intersection_samples(&[0.0; 3], &[2.0, 0.0, 0.0], 1, 0).is_err());
        assert!(sphere_intersection_samples(&[0.0; 3], &[0.0; 3], 1, 0).is_err());
    }

    #[test]
    fn planar_examples() {
        let norm = Norm::Polytope(PolytopeNorm::hexagon());
        for (k, m, n, e) in [(2, 2, 8, 4), (2, 1, 4, 1), (3, 3, 24, 24)] {
            let r = bipartite_construction(&norm, 2, k, m, 7).unwrap();
            assert_eq!(r.points.len(), n);
            assert_eq!(r.promised_edges, e);
            assert!(build_udg(&r.points, &norm, TAU).unwrap().num_edges() as u64 >= e);
        }
    }

    #[test]
    fn spatial_example() {
        let norm = Norm::euclidean(3);
        let r = bipartite_construction(&norm, 3, 2, 3, 3).unwrap();
        assert_eq!(r.points.len(), 32);
        assert_eq!(r.promised_edges, 48);
        assert!(build_udg(&r.points, &norm, TAU).unwrap().num_edges() >= 48);
    }

    #[test]
    fn unsupported_combinations() {
        let cube = Norm::Polytope(PolytopeNorm::linf(3));
        assert!(matches!(bipartite_construction(&cube, 3, 2, 2, 0), Err(ConstructionError::Unsupported(_))));
        assert!(matches!(
            bipartite_construction(&Norm::euclidean(4), 4, 2, 2, 0),
            Err(ConstructionError::Unsupported(_))
        ));
    }
}
