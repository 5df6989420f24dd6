use super::{factor, random_unit, rng_for, ConstructionError, ConstructionResult, FactorKind, Sum, Vector, RETRY_BUDGET};
use crate::norms::Norm;

/// All `2^k` subset sums of `k` random unit vectors; the hypercube graph
/// `Q_k` appears among them as unit distances. Exact for polytope norms.
pub fn hypercube_embedding(norm: &Norm, k: u32, seed: u64) -> Result<ConstructionResult, ConstructionError> {
    if k == 0 || k > 24 {
        return Err(ConstructionError::InvalidParameter(format!("k must be in 1..=24, got {k}")));
    }
    let d = norm.dim();
    let exact = matches!(norm, Norm::Polytope(_));
    let mut rng = rng_for(seed);
    let mut sum = Sum::origin(exact, d);
    let mut factors = Vec::new();
    for i in 0..k {
        let mut next = None;
        for _ in 0..RETRY_BUDGET {
            let u = random_unit(norm, &mut rng)?;
            let summands = [u.scaled(0), u];
            if let Some(s) = sum.extend(&summands) {
                next = Some((s, summands));
                break;
            }
        }
        let (s, summands): (Sum, [Vector; 2]) =
            next.ok_or_else(|| ConstructionError::RetryBudgetExhausted(format!("hypercube vector {}", i + 1)))?;
        factors.push(factor(FactorKind::ZeroZPair, &summands, d)?);
        sum = s;
    }
    Ok(ConstructionResult {
        points: sum.into_pointset(d)?,
        promised_edges: k as u64 * (1u64 << (k - 1)),
        factors,
        blocks: Vec::new(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgraph::{build_udg, TAU};
    use crate::norms::{random_polytope_norm, PolytopeNorm};

    #[test]
    fn small_cases() {
        let norm = Norm::Polytope(PolytopeNorm::linf(2));
        let r = hypercube_embedding(&norm, 1, 0).unwrap();
        assert_eq!(r.points.len(), 2);
        assert_eq!(build_udg(&r.points, &norm, TAU).unwrap().num_edges(), 1);
        let r = hypercube_embedding(&Norm::euclidean(2), 3, 5).unwrap();
        assert_eq!(r.points.len(), 8);
        assert_eq!(build_udg(&r.points, &Norm::euclidean(2), TAU).unwrap().num_edges(), 12);
        assert!(hypercube_embedding(&norm, 0, 0).is_err());
    }

    #[test]
    fn k10_random_polytope_exact() {
        let norm = Norm::Polytope(random_polytope_norm(2, 16, &mut rng_for(11)));
        let r = hypercube_embedding(&norm, 10, 3).unwrap();
        assert_eq!(r.points.len(), 1024);
        assert_eq!(build_udg(&r.points, &norm, TAU).unwrap().num_edges(), 5120);
    }

    #[test]
    fn deterministic() {
        let norm = Norm::Polytope(PolytopeNorm::hexagon());
        assert_eq!(hypercube_embedding(&norm, 4, 9).unwrap(), hypercube_embedding(&norm, 4, 9).unwrap());
    }
}
