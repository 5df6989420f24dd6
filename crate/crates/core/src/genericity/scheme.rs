use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GenericityError;
use crate::qlinalg::{QMatrix, QVector, Rational};

/// Rational dependency pattern: `u_j = Σ_i a_ji·u_i` for `j = 1..dℓ+1`,
/// with `A` of shape `(dℓ+1) × ℓ`. The angle threshold is carried along
/// but plays no role in plane generation.
#[derive(Clone, Debug, PartialEq)]
pub struct DependencyScheme {
    pub d: usize,
    pub l: usize,
    pub a: QMatrix,
    pub eta_deg: Rational,
}

impl DependencyScheme {
    pub fn new(d: usize, l: usize, a: QMatrix, eta_deg: Rational) -> Result<Self, GenericityError> {
        if d == 0 || l == 0 {
            return Err(GenericityError::InvalidScheme("d and l must be positive".into()));
        }
        if a.rows() != d * l + 1 || a.cols() != l {
            return Err(GenericityError::InvalidScheme(format!(
                "A must be {}x{l}, got {}x{}",
                d * l + 1,
                a.rows(),
                a.cols()
            )));
        }
        if !eta_deg.is_positive() {
            return Err(GenericityError::InvalidScheme("eta must be positive".into()));
        }
        Ok(DependencyScheme { d, l, a, eta_deg })
    }

    /// Number of dependent unit vectors, `dℓ + 1`.
    pub fn width(&self) -> usize {
        self.d * self.l + 1
    }

    /// Largest numerator or denominator among the entries of `A`.
    pub fn height(&self) -> num_bigint::BigInt {
        (0..self.a.rows())
            .flat_map(|i| (0..self.a.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.a.get(i, j).height())
            .max()
            .unwrap_or_default()
    }

    /// The `dℓ+1` linear forms (rows) in the coordinates of `u_1..u_ℓ`:
    /// row `j` is `signs_j · (a_j1·o_φ(j), …, a_jℓ·o_φ(j))`.
    pub fn forms(&self, normals: &[QVector], phi: &[usize], signs: &[i8]) -> Result<QMatrix, GenericityError> {
        let w = self.width();
        if phi.len() != w {
            return Err(GenericityError::DimensionMismatch { expected: w, got: phi.len() });
        }
        if signs.len() != w {
            return Err(GenericityError::DimensionMismatch { expected: w, got: signs.len() });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(GenericityError::InvalidParameter("signs must be +1 or -1".into()));
        }
        let mut used = vec![false; normals.len()];
        for &f in phi {
            if f >= normals.len() {
                return Err(GenericityError::InvalidParameter(format!("facet index {f} out of range")));
            }
            if std::mem::replace(&mut used[f], true) {
                return Err(GenericityError::NotInjective);
            }
        }
        let mut m = QMatrix::zeros(w, self.d * self.l);
        for j in 0..w {
            let o = &normals[phi[j]];
            if o.dim() != self.d {
                return Err(GenericityError::DimensionMismatch { expected: self.d, got: o.dim() });
            }
            for i in 0..self.l {
                let a = self.a.get(j, i);
                if a.is_zero() {
                    continue;
                }
                let a = if signs[j] < 0 { -a } else { a.clone() };
                for c in 0..self.d {
                    m.set(j, i * self.d + c, &a * &o[c]);
                }
            }
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct RawScheme {
    d: usize,
    l: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    eta_deg: Rational,
}

impl Serialize for DependencyScheme {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a = (0..self.a.rows()).map(|i| self.a.row(i).to_vec()).collect();
        RawScheme { d: self.d, l: self.l, a, eta_deg: self.eta_deg.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DependencyScheme {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawScheme::deserialize(de)?;
        let a = QMatrix::from_rows(&raw.a).map_err(serde::de::Error::custom)?;
        DependencyScheme::new(raw.d, raw.l, a, raw.eta_deg).map_err(serde::de::Error::custom)
    }
}

/// All rationals `p/q` in lowest terms with `|p| ≤ h` and `1 ≤ q ≤ h`,
/// sorted.
pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut out: Vec<Rational> = (1..=h)
        .flat_map(|q| (-h..=h).map(move |p| Rational::new(p, q)))
        .collect();
    out.sort();
    out.dedup();
    out
}
