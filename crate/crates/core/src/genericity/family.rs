use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{DependencyScheme, GenericityError};
use crate::qlinalg::{nullspace, QVector, Rational};

/// Upper limit on `injections · 2^(dℓ+1)` for explicit families.
pub const FAMILY_LIMIT: u128 = 2_000_000;

/// A hyperplane `c·t = 0` in offset space, with the facet assignment and
/// sign pattern that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plane {
    /// Primitive integer vector, first nonzero entry positive.
    pub coefficients: QVector,
    pub injection: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneFamily {
    pub h: usize,
    pub planes: Vec<Plane>,
}

impl HyperplaneFamily {
    pub fn empty(h: usize) -> Self {
        HyperplaneFamily { h, planes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// First plane through `t`, if any.
    pub fn first_containing(&self, t: &QVector) -> Option<&Plane> {
        self.planes.iter().find(|p| p.coefficients.dot(t).is_zero())
    }
}

/// Integer multiple of `v` with coprime entries and positive leading entry.
fn primitive(v: &QVector) -> QVector {
    let den = v.entries().iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.entries().iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.clone();
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    let entries = ints.into_iter().map(|x| Rational::from_bigints(x * sign / &g, BigInt::one())).collect();
    QVector::new(entries).expect("nonempty")
}

fn lift(h: usize, phi: &[usize], lambda: &[Rational]) -> QVector {
    let mut c = QVector::zeros(h);
    for (&f, l) in phi.iter().zip(lambda) {
        c[f] = l.clone();
    }
    c
}

/// Dependence among the scheme's forms for one facet assignment `φ` and
/// sign pattern, lifted to a plane in `ℚ^h` (`h` = number of normals).
///
/// The coefficients come from the first basis vector of the forms' left
/// nullspace (reduced row echelon order); `dℓ+1` forms in `dℓ` variables
/// always leave it nonempty.
pub fn achievability_hyperplanes(
    scheme: &DependencyScheme,
    normals: &[QVector],
    phi: &[usize],
    signs: &[i8],
) -> Result<QVector, GenericityError> {
    let forms = scheme.forms(normals, phi, signs)?;
    let lambda = nullspace(&forms.transpose()).into_iter().next().expect("more forms than variables");
    Ok(primitive(&lift(normals.len(), phi, lambda.entries())))
}

fn injection_count(h: usize, w: usize) -> u128 {
    (0..w).map(|i| (h - i) as u128).product()
}

fn injections_starting_with(first: usize, h: usize, w: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![first];
    let mut used = vec![false; h];
    used[first] = true;
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], w: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == w {
            out.push(cur.clone());
            return;
        }
        for f in 0..used.len() {
            if !used[f] {
                used[f] = true;
                cur.push(f);
                rec(cur, used, w, out);
                cur.pop();
                used[f] = false;
            }
        }
    }
    rec(&mut cur, &mut used, w, &mut out);
    out
}

/// Planes for every injective facet assignment and every sign pattern,
/// deduplicated (first provenance kept). Empty when there are fewer normals
/// than dependent vectors.
///
/// Flipping sign `j` negates form `j` and therefore coefficient `φ(j)`, so
/// each assignment needs a single nullspace computation.
pub fn full_family(scheme: &DependencyScheme, normals: &[QVector]) -> Result<HyperplaneFamily, GenericityError> {
    let h = normals.len();
    let w = scheme.width();
    if h < w {
        return Ok(HyperplaneFamily::empty(h));
    }
    let planes = injection_count(h, w).saturating_mul(1u128 << w.min(100));
    if planes > FAMILY_LIMIT {
        return Err(GenericityError::TooLarge { planes, limit: FAMILY_LIMIT });
    }
    let plus = vec![1i8; w];
    scheme.forms(normals, &(0..w).collect::<Vec<_>>(), &plus)?;
    let chunks: Vec<Vec<Plane>> = (0..h)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            for phi in injections_starting_with(first, h, w) {
                let forms = scheme.forms(normals, &phi, &plus).expect("validated");
                let lambda = nullspace(&forms.transpose()).into_iter().next().expect("more forms than variables");
                for bits in 0..1u32 << w {
                    let signs: Vec<i8> = (0..w).map(|j| if bits >> j & 1 == 1 { -1 } else { 1 }).collect();
                    let flipped: Vec<Rational> =
                        lambda.entries().iter().zip(&signs).map(|(l, &s)| if s < 0 { -l } else { l.clone() }).collect();
                    out.push(Plane { coefficients: primitive(&lift(h, &phi, &flipped)), injection: phi.clone(), signs });
                }
            }
            out
        })
        .collect();
    let mut seen = HashSet::new();
    let planes = chunks.into_iter().flatten().filter(|p| seen.insert(p.coefficients.clone())).collect();
    Ok(HyperplaneFamily { h, planes })
}

/// Whether `t` lies on some plane of the family.
pub fn is_achievable(t: &QVector, family: &HyperplaneFamily) -> Result<bool, GenericityError> {
    if t.dim() != family.h {
        return Err(GenericityError::DimensionMismatch { expected: family.h, got: t.dim() });
    }
    Ok(family.first_containing(t).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::QMatrix;

    fn example() -> (DependencyScheme, Vec<QVector>) {
        let a = QMatrix::from_int_rows(&[&[1], &[2], &[3]]).unwrap();
        let s = DependencyScheme::new(2, 1, a, Rational::from_integer(5)).unwrap();
        let o = vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1]), QVector::from_ints(&[1, 1])];
        (s, o)
    }

    #[test]
    fn worked_example_plane() {
        let (s, o) = example();
        let c = achievability_hyperplanes(&s, &o, &[0, 1, 2], &[1, 1, 1]).unwrap();
        assert_eq!(c, QVector::from_ints(&[6, 3, -2]));
        let t = QVector::from_ints(&[1, 2, 6]);
        let fam = HyperplaneFamily { h: 3, planes: vec![Plane { coefficients: c, injection: vec![0, 1, 2], signs: vec![1; 3] }] };
        assert!(is_achievable(&t, &fam).unwrap());
        assert!(!is_achievable(&QVector::from_ints(&[1, 2, 7]), &fam).unwrap());
        assert!(!is_achievable(&t, &HyperplaneFamily::empty(3)).unwrap());
    }

    #[test]
    fn sign_flip_matches_recomputation() {
        let (s, o) = example();
        let c = achievability_hyperplanes(&s, &o, &[0, 1, 2], &[1, -1, 1]).unwrap();
        assert_eq!(c, QVector::from_ints(&[6, -3, -2]));
    }

    #[test]
    fn family_sizes() {
        let (s, o) = example();
        let fam = full_family(&s, &o).unwrap();
        assert!(!fam.is_empty() && fam.len() <= 6 * 8);
        for p in &fam.planes {
            let direct = achievability_hyperplanes(&s, &o, &p.injection, &p.signs).unwrap();
            assert_eq!(direct, p.coefficients);
        }
        assert!(full_family(&s, &o[..2]).unwrap().is_empty());
        assert!(matches!(
            achievability_hyperplanes(&s, &o, &[0, 0, 1], &[1, 1, 1]),
            Err(GenericityError::NotInjective)
        ));
    }
}
