use super::{dist, NormError};

/// Greedy epsilon-net in input order: a point is kept when its Euclidean
/// distance to every kept point exceeds `eps`. Returns indices of kept points.
pub fn epsilon_net_indices(points: &[Vec<f64>], eps: f64) -> Result<Vec<usize>, NormError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(NormError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if kept.iter().all(|&j| dist(&points[j], p) > eps) {
            kept.push(i);
        }
    }
    Ok(kept)
}

pub fn epsilon_net(points: &[Vec<f64>], eps: f64) -> Result<Vec<Vec<f64>>, NormError> {
    Ok(epsilon_net_indices(points, eps)?.into_iter().map(|i| points[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert_eq!(epsilon_net(&pts, 1.0).unwrap(), vec![vec![0.0], vec![2.0]]);
        assert_eq!(epsilon_net(&pts, 5.0).unwrap(), vec![vec![0.0]]);
        assert!(epsilon_net(&pts, 0.0).is_err());
        assert!(epsilon_net(&pts, -1.0).is_err());
    }
}
