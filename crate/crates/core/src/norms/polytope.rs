use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, NormError, NormSpec};
use crate::qlinalg::{rank, QMatrix, QVector, Rational};

/// One symmetric slab `|normal . x| <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: QVector,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: QVector, offset: Rational) -> Self {
        Facet { normal, offset }
    }

    pub fn from_ints(normal: &[i64], offset: Rational) -> Self {
        Facet { normal: QVector::from_ints(normal), offset }
    }
}

/// Norm whose unit ball is `{x : |o_i . x| <= t_i for all i}`, so that
/// `||x|| = max_i |o_i . x| / t_i`. Normals are stored with their first
/// nonzero coordinate positive and are not rescaled otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpec", into = "NormSpec")]
pub struct PolytopeNorm {
    d: usize,
    facets: Vec<Facet>,
    // o_i / t_i, exact and rounded
    scaled: Vec<QVector>,
    scaled_f64: Vec<Vec<f64>>,
}

impl PolytopeNorm {
    pub fn new(d: usize, facets: Vec<Facet>) -> Result<Self, NormError> {
        if d == 0 {
            return Err(NormError::InvalidNorm("dimension must be positive".into()));
        }
        if facets.is_empty() {
            return Err(NormError::InvalidNorm("no facets".into()));
        }
        let mut canon = Vec::with_capacity(facets.len());
        for (i, f) in facets.into_iter().enumerate() {
            check_dim(d, f.normal.dim())?;
            if f.normal.is_zero() {
                return Err(NormError::InvalidNorm(format!("facet {i} has a zero normal")));
            }
            if !f.offset.is_positive() {
                return Err(NormError::InvalidNorm(format!("facet {i} has a nonpositive offset")));
            }
            canon.push(Facet { normal: f.normal.sign_normalized(), offset: f.offset });
        }
        let normals: Vec<QVector> = canon.iter().map(|f| f.normal.clone()).collect();
        if rank(&QMatrix::from_vectors(&normals, d)?) < d {
            return Err(NormError::Unbounded(d));
        }
        let scaled: Vec<QVector> = canon.iter().map(|f| f.normal.scale(&f.offset.recip())).collect();
        let scaled_f64 = scaled.iter().map(QVector::to_f64).collect();
        Ok(PolytopeNorm { d, facets: canon, scaled, scaled_f64 })
    }

    /// Unit cube `max |x_i| <= 1`.
    pub fn linf(d: usize) -> Self {
        let facets = (0..d).map(|i| Facet::new(QVector::unit(d, i), Rational::one())).collect();
        Self::new(d, facets).expect("cube is a valid norm")
    }

    /// Cross-polytope `sum |x_i| <= 1`.
    pub fn l1(d: usize) -> Self {
        let mut facets = Vec::new();
        for mask in 0..(1u32 << (d - 1)) {
            let normal: Vec<i64> = (0..d)
                .map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 })
                .collect();
            facets.push(Facet::from_ints(&normal, Rational::one()));
        }
        Self::new(d, facets).expect("cross-polytope is a valid norm")
    }

    /// Hexagon with rational vertices (+-1, 0), (+-1/2, +-1).
    pub fn hexagon() -> Self {
        Self::new(
            2,
            vec![
                Facet::from_ints(&[0, 1], Rational::one()),
                Facet::from_ints(&[2, 1], Rational::from_integer(2)),
                Facet::from_ints(&[2, -1], Rational::from_integer(2)),
            ],
        )
        .expect("hexagon is a valid norm")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Rows `o_i / t_i`.
    pub fn scaled_normals(&self) -> &[QVector] {
        &self.scaled
    }

    pub fn scaled_normals_f64(&self) -> &[Vec<f64>] {
        &self.scaled_f64
    }

    /// Unit ball scaled by `s > 0` (offsets multiplied by `s`).
    pub fn dilate(&self, s: &Rational) -> Result<Self, NormError> {
        let facets = self
            .facets
            .iter()
            .map(|f| Facet::new(f.normal.clone(), &f.offset * s))
            .collect();
        Self::new(self.d, facets)
    }

    pub fn with_offsets(&self, offsets: &[Rational]) -> Result<Self, NormError> {
        check_dim(self.facets.len(), offsets.len())?;
        let facets = self
            .facets
            .iter()
            .zip(offsets)
            .map(|(f, t)| Facet::new(f.normal.clone(), t.clone()))
            .collect();
        Self::new(self.d, facets)
    }

    pub fn eval_exact(&self, x: &QVector) -> Result<Rational, NormError> {
        check_dim(self.d, x.dim())?;
        Ok(self.eval_exact_unchecked(x))
    }

    pub(crate) fn eval_exact_unchecked(&self, x: &QVector) -> Rational {
        self.scaled
            .iter()
            .map(|s| s.dot(x).abs())
            .max()
            .expect("at least one facet")
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, NormError> {
        check_dim(self.d, x.len())?;
        Ok(self.eval_f64_unchecked(x))
    }

    pub(crate) fn eval_f64_unchecked(&self, x: &[f64]) -> f64 {
        self.scaled_f64
            .iter()
            .map(|s| s.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Exact projections `(o_i . x) / t_i` for every facet.
    pub fn projections(&self, x: &QVector) -> Vec<Rational> {
        self.scaled.iter().map(|s| s.dot(x)).collect()
    }
}

/// Polytope circumscribed (up to rounding) about the Euclidean unit ball:
/// one facet pair for every primitive integer normal with entries in
/// `[-max_entry, max_entry]`, offset `|o|_2` rounded to a multiple of 1/1000.
/// Small integer normals keep exact arithmetic on it cheap.
pub fn near_round_polytope(d: usize, max_entry: i64) -> PolytopeNorm {
    assert!(d >= 1 && max_entry >= 1);
    let mut facets = Vec::new();
    let mut v = vec![-max_entry; d];
    loop {
        let lead = v.iter().find(|&&x| x != 0).copied();
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if lead.is_some_and(|l| l > 0) && g == 1 {
            let len = v.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
            facets.push(Facet::from_ints(&v, Rational::new((len * 1000.0).round() as i64, 1000)));
        }
        let Some(pos) = v.iter().rposition(|&x| x < max_entry) else {
            break;
        };
        v[pos] += 1;
        for x in &mut v[pos + 1..] {
            *x = -max_entry;
        }
    }
    PolytopeNorm::new(d, facets).expect("contains the coordinate directions")
}

/// Random bounded rational polytope norm with `h` facet pairs. Normals have
/// integer entries in `[-3, 3]` and pairwise distinct directions; offsets are
/// `|o_i|_2` times a random factor in `[1, 1.05]`, rounded to a multiple of
/// 1/1000, so the ball is close to round and most slabs are actual facets.
pub fn random_polytope_norm<R: Rng>(d: usize, h: usize, rng: &mut R) -> PolytopeNorm {
    assert!(h >= d, "need at least d facets");
    let available = (7usize.pow(d as u32) - 1) / 2;
    assert!(h <= available, "at most {available} normal directions with entries in [-3, 3]");
    loop {
        let mut normals: Vec<QVector> = Vec::new();
        while normals.len() < h {
            let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
            let v = QVector::from_ints(&v);
            if v.is_zero() {
                continue;
            }
            let key = v.projective_key();
            if normals.iter().any(|w| w.projective_key() == key) {
                continue;
            }
            normals.push(v);
        }
        let facets = normals
            .into_iter()
            .map(|n| {
                let len = super::euclid(&n.to_f64());
                let t = (len * rng.gen_range(1.0..1.05) * 1000.0).round() as i64;
                Facet::new(n, Rational::new(t, 1000))
            })
            .collect();
        if let Ok(p) = PolytopeNorm::new(d, facets) {
            return p;
        }
    }
}
