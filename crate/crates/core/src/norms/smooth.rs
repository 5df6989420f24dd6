use super::{check_dim, euclid, NormError, PolytopeNorm};

/// Strictly convex norms evaluated in floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothNorm {
    Euclidean { d: usize },
    Lp { d: usize, p: f64 },
    /// `base(x) + epsilon * |x|_2`
    Strictified { base: PolytopeNorm, epsilon: f64 },
}

impl SmoothNorm {
    pub fn lp(d: usize, p: f64) -> Result<Self, NormError> {
        if d == 0 {
            return Err(NormError::InvalidParameter("dimension must be positive".into()));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(NormError::InvalidParameter(format!("lp exponent must be finite and > 1, got {p}")));
        }
        Ok(SmoothNorm::Lp { d, p })
    }

    pub fn strictified(base: PolytopeNorm, epsilon: f64) -> Result<Self, NormError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(NormError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(SmoothNorm::Strictified { base, epsilon })
    }

    pub fn dim(&self) -> usize {
        match self {
            SmoothNorm::Euclidean { d } | SmoothNorm::Lp { d, .. } => *d,
            SmoothNorm::Strictified { base, .. } => base.dim(),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, NormError> {
        check_dim(self.dim(), x.len())?;
        Ok(match self {
            SmoothNorm::Euclidean { .. } => euclid(x),
            SmoothNorm::Lp { p, .. } => {
                let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if m == 0.0 {
                    0.0
                } else {
                    m * x.iter().map(|v| (v.abs() / m).powf(*p)).sum::<f64>().powf(1.0 / p)
                }
            }
            SmoothNorm::Strictified { base, epsilon } => base.eval_f64_unchecked(x) + epsilon * euclid(x),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e = SmoothNorm::Euclidean { d: 2 };
        assert_eq!(e.eval_f64(&[3.0, 4.0]).unwrap(), 5.0);
        let s = SmoothNorm::strictified(PolytopeNorm::linf(2), 1.0 / 25.0).unwrap();
        assert!((s.eval_f64(&[3.0, 4.0]).unwrap() - 4.2).abs() < 1e-12);
        let l3 = SmoothNorm::lp(2, 3.0).unwrap();
        assert!((l3.eval_f64(&[1.0, 1.0]).unwrap() - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(SmoothNorm::lp(2, 1.0).is_err());
        assert!(SmoothNorm::strictified(PolytopeNorm::linf(2), 0.0).is_err());
    }
}
